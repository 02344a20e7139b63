#pragma once

// Umbrella header: the whole library in one include.

#include "balksim/cli_runner.hpp"
#include "balksim/config.hpp"
#include "balksim/events.hpp"
#include "balksim/experiments.hpp"
#include "balksim/parallel.hpp"
#include "balksim/policies.hpp"
#include "balksim/policy_io.hpp"
#include "balksim/qtable.hpp"
#include "balksim/queue.hpp"
#include "balksim/rewards.hpp"
#include "balksim/rng.hpp"
#include "balksim/schedule.hpp"
#include "balksim/sim.hpp"
#include "balksim/state.hpp"
#include "balksim/stats.hpp"
#include "balksim/trainer.hpp"
