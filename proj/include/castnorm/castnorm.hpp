/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include "castnorm/basic.hpp"
#include "castnorm/types.hpp"
#include "castnorm/expr.hpp"
#include "castnorm/numeral.hpp"
#include "castnorm/pretty.hpp"
#include "castnorm/pattern.hpp"
#include "castnorm/rules.hpp"
#include "castnorm/parser.hpp"
#include "castnorm/trace.hpp"
#include "castnorm/rewrite.hpp"
#include "castnorm/normalize.hpp"
#include "castnorm/value.hpp"
#include "castnorm/oracle.hpp"
#include "castnorm/problem.hpp"
