#pragma once

#include "episodes/candidates.hpp"
#include "episodes/episode.hpp"
#include "episodes/errors.hpp"
#include "episodes/event.hpp"
#include "episodes/parallel_miner.hpp"
#include "episodes/report.hpp"
#include "episodes/serial_miner.hpp"
#include "episodes/significance.hpp"
#include "episodes/simulator.hpp"
#include "episodes/spike_csv.hpp"
#include "episodes/synfire.hpp"
#include "episodes/units.hpp"
