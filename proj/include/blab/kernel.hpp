#pragma once

#include "blab/kernel/closed_form.hpp"
#include "blab/kernel/diagnostics.hpp"
#include "blab/kernel/model.hpp"
#include "blab/kernel/reinhardt.hpp"
