// Umbrella header: grammar frontend, machine nets, analyses, pilots, the
// five parse engines, the LR(1) reference oracle, and DOT export.
#pragma once

#include "netparse/analysis.hpp"
#include "netparse/basics.hpp"
#include "netparse/dot.hpp"
#include "netparse/earley.hpp"
#include "netparse/ell.hpp"
#include "netparse/elr_runtime.hpp"
#include "netparse/grammar.hpp"
#include "netparse/lr1.hpp"
#include "netparse/machine.hpp"
#include "netparse/parse_common.hpp"
#include "netparse/pilot.hpp"
