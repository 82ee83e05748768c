#pragma once

#include "blab/basis/factor.hpp"
#include "blab/basis/gram.hpp"
#include "blab/basis/quadrature.hpp"
#include "blab/basis/terms.hpp"
