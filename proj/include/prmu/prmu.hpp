#pragma once

#include "classify.hpp"
#include "corpus.hpp"
#include "document.hpp"
#include "eval.hpp"
#include "expansion.hpp"
#include "experiment.hpp"
#include "generation.hpp"
#include "index.hpp"
#include "log.hpp"
#include "porter.hpp"
#include "ranking.hpp"
#include "textnorm.hpp"
