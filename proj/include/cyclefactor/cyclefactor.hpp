#ifndef CYCLEFACTOR_CYCLEFACTOR_HPP
#define CYCLEFACTOR_CYCLEFACTOR_HPP

#include "cyclefactor/edge_list.hpp"
#include "cyclefactor/experiments.hpp"
#include "cyclefactor/factor.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/hamilton.hpp"
#include "cyclefactor/partition.hpp"
#include "cyclefactor/report.hpp"
#include "cyclefactor/rng.hpp"

#endif
