#pragma once

#include "blab/zeros/slice.hpp"
#include "blab/zeros/verdict.hpp"
#include "blab/zeros/winding.hpp"
