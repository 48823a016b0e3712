#pragma once

#include "knotfill/checks.hpp"
#include "knotfill/constructions.hpp"
#include "knotfill/errors.hpp"
#include "knotfill/explorer.hpp"
#include "knotfill/finite_groups.hpp"
#include "knotfill/homsearch.hpp"
#include "knotfill/knots.hpp"
#include "knotfill/presentation.hpp"
#include "knotfill/quadext.hpp"
#include "knotfill/reps.hpp"
#include "knotfill/slope.hpp"
#include "knotfill/smith.hpp"
#include "knotfill/symbol.hpp"
#include "knotfill/word.hpp"
