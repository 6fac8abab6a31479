#pragma once

#include "cactus/error.hpp"
#include "cactus/series.hpp"
#include "cactus/omega.hpp"
#include "cactus/grammar.hpp"
#include "cactus/counting.hpp"
#include "cactus/templates.hpp"
#include "cactus/graph.hpp"
#include "cactus/split_tree.hpp"
#include "cactus/structure.hpp"
#include "cactus/sampler.hpp"
#include "cactus/oracle.hpp"
