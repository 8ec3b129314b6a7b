#pragma once

#include "kpa/constructions.hpp"
#include "kpa/io.hpp"
#include "kpa/kahler.hpp"
#include "kpa/matrix.hpp"
#include "kpa/morphism.hpp"
#include "kpa/poisson.hpp"
#include "kpa/ring.hpp"
#include "kpa/verdicts.hpp"
