#pragma once

#include "blab/lab/basis_choice.hpp"
#include "blab/lab/config.hpp"
#include "blab/lab/experiments.hpp"
#include "blab/lab/report.hpp"
