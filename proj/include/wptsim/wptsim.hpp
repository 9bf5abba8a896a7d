#pragma once

#include "wptsim/antenna.hpp"
#include "wptsim/config.hpp"
#include "wptsim/csvfmt.hpp"
#include "wptsim/duty.hpp"
#include "wptsim/harvester.hpp"
#include "wptsim/linkbudget.hpp"
#include "wptsim/presets.hpp"
#include "wptsim/quantities.hpp"
#include "wptsim/regulations.hpp"
#include "wptsim/simcore.hpp"
#include "wptsim/tagmodel.hpp"
