#pragma once

#include <shm/errors.hpp>
#include <shm/io.hpp>
#include <shm/kernel.hpp>
#include <shm/linalg.hpp>
#include <shm/matrix.hpp>
#include <shm/model.hpp>
#include <shm/projector.hpp>
#include <shm/qp.hpp>
#include <shm/qp_oracle.hpp>
#include <shm/svd_reduction.hpp>
#include <shm/train.hpp>
#include <shm/training_set.hpp>
#include <shm/verify.hpp>
