#pragma once

#include "aprob/bayes_net.hpp"
#include "aprob/benchmarks.hpp"
#include "aprob/beta_operators.hpp"
#include "aprob/experiments.hpp"
#include "aprob/ground_program.hpp"
#include "aprob/grounding.hpp"
#include "aprob/incomplete_beta.hpp"
#include "aprob/inference.hpp"
#include "aprob/opinion.hpp"
#include "aprob/parser.hpp"
#include "aprob/program.hpp"
#include "aprob/random.hpp"
#include "aprob/semiring.hpp"
#include "aprob/sl_operators.hpp"
