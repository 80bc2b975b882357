#pragma once

#include "skillclf/corpus.hpp"
#include "skillclf/embedding.hpp"
#include "skillclf/error.hpp"
#include "skillclf/evaluation.hpp"
#include "skillclf/hierarchy.hpp"
#include "skillclf/nn/architecture.hpp"
#include "skillclf/nn/mlp.hpp"
#include "skillclf/nn/model_io.hpp"
#include "skillclf/nn/optimizer.hpp"
#include "skillclf/nn/trainer.hpp"
#include "skillclf/taxonomy.hpp"
#include "skillclf/text.hpp"
