#pragma once

// Everything except the command-line front end.
#include "dynsc/algorithms.hpp"
#include "dynsc/bench.hpp"
#include "dynsc/dynamizer.hpp"
#include "dynsc/global.hpp"
#include "dynsc/levels.hpp"
#include "dynsc/local.hpp"
#include "dynsc/oracle.hpp"
#include "dynsc/partial.hpp"
#include "dynsc/powers.hpp"
#include "dynsc/robust.hpp"
#include "dynsc/setsystem.hpp"
#include "dynsc/static_greedy.hpp"
#include "dynsc/synthetic.hpp"
#include "dynsc/update.hpp"
