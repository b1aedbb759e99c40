#pragma once

#include "bubbly/breathing.hpp"
#include "bubbly/cloud.hpp"
#include "bubbly/config.hpp"
#include "bubbly/csv.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/experiments.hpp"
#include "bubbly/foldy_lax.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/hash.hpp"
#include "bubbly/layer_potentials.hpp"
#include "bubbly/manifest.hpp"
#include "bubbly/media.hpp"
#include "bubbly/parallel.hpp"
#include "bubbly/scattering.hpp"
#include "bubbly/signal.hpp"
#include "bubbly/version.hpp"
