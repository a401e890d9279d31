#ifndef DALG_DALG_HPP
#define DALG_DALG_HPP

#include "dalg/error.hpp"
#include "dalg/monoid.hpp"
#include "dalg/var.hpp"
#include "dalg/poly.hpp"
#include "dalg/ratfun.hpp"
#include "dalg/linear.hpp"
#include "dalg/derivation.hpp"
#include "dalg/tower.hpp"
#include "dalg/jet.hpp"
#include "dalg/config.hpp"
#include "dalg/prolong.hpp"
#include "dalg/axioms.hpp"
#include "dalg/parse.hpp"

#endif
