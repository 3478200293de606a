// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "eigenmin/canonical.hpp"
#include "eigenmin/eigensolver.hpp"
#include "eigenmin/errors.hpp"
#include "eigenmin/fem.hpp"
#include "eigenmin/format.hpp"
#include "eigenmin/mesh.hpp"
#include "eigenmin/trial.hpp"
#include "eigenmin/verify.hpp"
