#pragma once

#include "multicolor/circuits.hpp"
#include "multicolor/cnf.hpp"
#include "multicolor/detecting.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/graph.hpp"
#include "multicolor/instance.hpp"
#include "multicolor/rand.hpp"
#include "multicolor/reduction.hpp"
#include "multicolor/solvers.hpp"
