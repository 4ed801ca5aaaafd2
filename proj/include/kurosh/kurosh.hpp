#ifndef KUROSH_KUROSH_HPP
#define KUROSH_KUROSH_HPP

#include "kurosh/factor_groups.hpp"
#include "kurosh/words.hpp"
#include "kurosh/text_format.hpp"
#include "kurosh/magnus_order.hpp"
#include "kurosh/kurosh_graph.hpp"
#include "kurosh/pullback.hpp"
#include "kurosh/dicks_tree.hpp"
#include "kurosh/oracle.hpp"
#include "kurosh/fuzz.hpp"

#endif
