#pragma once

#include "rfpe/experiment_design.hpp"
#include "rfpe/harness.hpp"
#include "rfpe/likelihood.hpp"
#include "rfpe/oracle.hpp"
#include "rfpe/phase.hpp"
#include "rfpe/random.hpp"
#include "rfpe/rejection_filter.hpp"
#include "rfpe/reset_restart.hpp"
#include "rfpe/simulator.hpp"
