#pragma once

#include "mhkg/checkpoint.hpp"
#include "mhkg/dynamics.hpp"
#include "mhkg/experiment.hpp"
#include "mhkg/filters.hpp"
#include "mhkg/graph.hpp"
#include "mhkg/io.hpp"
#include "mhkg/model.hpp"
#include "mhkg/oversquashing.hpp"
#include "mhkg/spectral.hpp"
#include "mhkg/split.hpp"
#include "mhkg/synthdata.hpp"
#include "mhkg/types.hpp"
#include "mhkg/union_find.hpp"
