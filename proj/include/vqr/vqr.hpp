#pragma once

#include "vqr/config.hpp"
#include "vqr/corpus.hpp"
#include "vqr/csv.hpp"
#include "vqr/error.hpp"
#include "vqr/evaluation.hpp"
#include "vqr/grading.hpp"
#include "vqr/ids.hpp"
#include "vqr/indicator.hpp"
#include "vqr/panels.hpp"
#include "vqr/parallel.hpp"
#include "vqr/percentile.hpp"
#include "vqr/pipeline.hpp"
#include "vqr/random.hpp"
#include "vqr/replication.hpp"
#include "vqr/selection.hpp"
#include "vqr/stats.hpp"
#include "vqr/synthgen.hpp"
