#pragma once

#include "degpat/core.hpp"
#include "degpat/graph.hpp"
#include "degpat/subset_dict.hpp"
#include "degpat/witness_index.hpp"
#include "degpat/pattern.hpp"
#include "degpat/pattern_count.hpp"
#include "degpat/vc.hpp"
#include "degpat/ladder.hpp"
