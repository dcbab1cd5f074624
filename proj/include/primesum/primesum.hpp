#pragma once

#include "analysis.hpp"
#include "asymptotics.hpp"
#include "errors.hpp"
#include "inequalities.hpp"
#include "int128.hpp"
#include "prime_engine.hpp"
#include "quadrature.hpp"
