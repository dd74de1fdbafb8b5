#pragma once

#include "conecalc/asymptotics.hpp"
#include "conecalc/cone_operator.hpp"
#include "conecalc/cone_sobolev.hpp"
#include "conecalc/cross_section.hpp"
#include "conecalc/errors.hpp"
#include "conecalc/mellin.hpp"
#include "conecalc/serialize.hpp"
#include "conecalc/wedge.hpp"
