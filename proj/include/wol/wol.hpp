#pragma once

// Umbrella header.

#include "bignat.hpp"
#include "ordinal.hpp"
#include "expr.hpp"
#include "formula.hpp"
#include "parse.hpp"
#include "goedel.hpp"
#include "reflection.hpp"
#include "eval.hpp"
#include "compile.hpp"
#include "skolem.hpp"
#include "order.hpp"
#include "kb.hpp"
#include "pipeline.hpp"
#include "templates.hpp"
#include "embed.hpp"
#include "omega.hpp"
#include "stages.hpp"
#include "progressions.hpp"
