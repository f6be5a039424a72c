#pragma once

#include "graphsumm/batch_summarizer.hpp"
#include "graphsumm/bench.hpp"
#include "graphsumm/common.hpp"
#include "graphsumm/grouping.hpp"
#include "graphsumm/incremental_summarizer.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/metrics.hpp"
#include "graphsumm/partition.hpp"
#include "graphsumm/query_engine.hpp"
#include "graphsumm/summary_graph.hpp"
#include "graphsumm/summary_io.hpp"
#include "graphsumm/summary_state.hpp"
