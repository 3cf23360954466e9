#pragma once

#include "okgraph/classify.hpp"
#include "okgraph/errors.hpp"
#include "okgraph/graph.hpp"
#include "okgraph/integer.hpp"
#include "okgraph/intlin.hpp"
#include "okgraph/json.hpp"
#include "okgraph/ktheory.hpp"
#include "okgraph/present.hpp"
#include "okgraph/realize.hpp"
