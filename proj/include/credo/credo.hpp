#pragma once

// Umbrella header for the credo simulation library.

#include "credo/bandit.hpp"
#include "credo/cleanup.hpp"
#include "credo/config.hpp"
#include "credo/core.hpp"
#include "credo/credo_policy.hpp"
#include "credo/env.hpp"
#include "credo/harness.hpp"
#include "credo/io.hpp"
#include "credo/lattice.hpp"
#include "credo/learner.hpp"
#include "credo/log.hpp"
#include "credo/metrics.hpp"
#include "credo/report.hpp"
#include "credo/rng.hpp"
#include "credo/stats.hpp"
