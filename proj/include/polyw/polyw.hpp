#pragma once

#include "polyw/check.hpp"
#include "polyw/complex.hpp"
#include "polyw/constructors.hpp"
#include "polyw/covers.hpp"
#include "polyw/error.hpp"
#include "polyw/invariants.hpp"
#include "polyw/json_io.hpp"
#include "polyw/search.hpp"
#include "polyw/stats.hpp"
#include "polyw/whitehead.hpp"
#include "polyw/words.hpp"
