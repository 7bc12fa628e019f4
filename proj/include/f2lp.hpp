#pragma once

#include "f2lp/classes.hpp"
#include "f2lp/cli.hpp"
#include "f2lp/dependency.hpp"
#include "f2lp/elim.hpp"
#include "f2lp/emit.hpp"
#include "f2lp/error.hpp"
#include "f2lp/formula.hpp"
#include "f2lp/interpretation.hpp"
#include "f2lp/oracle/answer_sets.hpp"
#include "f2lp/oracle/ground.hpp"
#include "f2lp/oracle/models.hpp"
#include "f2lp/parser.hpp"
#include "f2lp/pipelines.hpp"
#include "f2lp/polarity.hpp"
#include "f2lp/printer.hpp"
#include "f2lp/program.hpp"
#include "f2lp/signature.hpp"
#include "f2lp/substitution.hpp"
#include "f2lp/term.hpp"
#include "f2lp/transforms.hpp"
#include "f2lp/zhang.hpp"
