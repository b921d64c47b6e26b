#pragma once

#include "factorder/domain.hpp"
#include "factorder/encoding.hpp"
#include "factorder/error.hpp"
#include "factorder/evaluation.hpp"
#include "factorder/io.hpp"
#include "factorder/learners/fixed_order.hpp"
#include "factorder/learners/knn.hpp"
#include "factorder/learners/majority.hpp"
#include "factorder/learners/stage_model.hpp"
#include "factorder/learners/tree.hpp"
#include "factorder/planner.hpp"
#include "factorder/random.hpp"
#include "factorder/statistics.hpp"
#include "factorder/synthetic.hpp"
