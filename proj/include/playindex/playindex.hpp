#pragma once

#include "playindex/core_model.hpp"
#include "playindex/geometry.hpp"
#include "playindex/metrics.hpp"
#include "playindex/jersey.hpp"
#include "playindex/team.hpp"
#include "playindex/imageops.hpp"
#include "playindex/clock.hpp"
#include "playindex/gamelog.hpp"
#include "playindex/synth.hpp"
#include "playindex/config.hpp"
#include "playindex/pipeline.hpp"
