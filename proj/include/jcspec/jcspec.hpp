#pragma once

#include "jcspec/asymptotics.hpp"
#include "jcspec/error.hpp"
#include "jcspec/matrix.hpp"
#include "jcspec/model.hpp"
#include "jcspec/perturbation.hpp"
#include "jcspec/projectors.hpp"
#include "jcspec/special_functions.hpp"
#include "jcspec/tridiagonal.hpp"
#include "jcspec/validation.hpp"
