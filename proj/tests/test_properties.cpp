#include <doctest.h>

#include "support/properties.hpp"

using namespace swnet::testing;

namespace {

void require_clean(const PropertyResult& r, int min_cases) {
  CAPTURE(r.name);
  CAPTURE(r.first_failure);
  CHECK(r.cases >= min_cases);
  CHECK(r.failures == 0);
}

}  // namespace

TEST_CASE("source functions") {
  require_clean(prop_sw_supermodular(101, 200), 200);
  require_clean(prop_vertex_sum_identity(102, 200), 200);
  require_clean(prop_active_iff_ci(103, 240), 200);
  require_clean(prop_ci_swap(104, 200), 200);
}

TEST_CASE("set-function vertices") {
  require_clean(prop_chain_equalities(111, 200), 200);
  require_clean(prop_intersection_vertices(112, 200), 200);
  require_clean(prop_condition_lattice(113, 300), 200);
  require_clean(prop_han_vs_lp(114, 300), 200);
}

TEST_CASE("flows") {
  require_clean(prop_rho_submodular(121, 200), 200);
  require_clean(prop_convex_flows(122, 200), 200);
  require_clean(prop_min_cost_flow_slackness(123, 200), 200);
  require_clean(prop_lambda_sweep(124, 50), 50);
}

TEST_CASE("linear programs") {
  require_clean(prop_single_sink_duality(131, 200), 200);
  require_clean(prop_single_sink_duality_exact(132, 25), 25);
  require_clean(prop_multisink(133, 200), 200);
}
