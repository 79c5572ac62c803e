#pragma once

#include "gittins/error.hpp"
#include "gittins/random.hpp"
#include "gittins/arm.hpp"
#include "gittins/oracle.hpp"
#include "gittins/schedule.hpp"
#include "gittins/select.hpp"
#include "gittins/tabular.hpp"
#include "gittins/metrics.hpp"
#include "gittins/train.hpp"
#include "gittins/deep/mlp.hpp"
#include "gittins/deep/adam.hpp"
#include "gittins/deep/replay.hpp"
#include "gittins/deep/dgn.hpp"
#include "gittins/deep/serialize.hpp"
#include "gittins/scheduling/jobs.hpp"
#include "gittins/scheduling/env.hpp"
#include "gittins/scheduling/train.hpp"
#include "gittins/harness/csv.hpp"
#include "gittins/harness/config.hpp"
#include "gittins/harness/experiment.hpp"
#include "gittins/harness/grid.hpp"
