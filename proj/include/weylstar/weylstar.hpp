#pragma once

#include "weylstar/core.hpp"
#include "weylstar/diag.hpp"
#include "weylstar/errors.hpp"
#include "weylstar/gauss.hpp"
#include "weylstar/scalar.hpp"
#include "weylstar/starexp.hpp"
#include "weylstar/starfn.hpp"
#include "weylstar/word.hpp"
