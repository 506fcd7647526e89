#pragma once

#include "semiq/core.hpp"
#include "semiq/partition.hpp"
#include "semiq/diagram.hpp"
#include "semiq/bracket.hpp"
#include "semiq/correlated.hpp"
#include "semiq/straighten.hpp"
#include "semiq/rank.hpp"
#include "semiq/evaluate.hpp"
#include "semiq/rewrite.hpp"
#include "semiq/experiments.hpp"
