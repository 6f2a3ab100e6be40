#include "snc/corpus.hpp"

#include <algorithm>
#include <stdexcept>

namespace snc::corpus {
namespace {

TandemNetwork sinktree(double c1, double c2, double c3) {
  return TandemNetwork({ConstantRate{c1}, ConstantRate{c2}, ConstantRate{c3}},
                       {FlowSpec{1, 1, 3, shared_arrival()}, FlowSpec{2, 2, 3, shared_arrival()},
                        FlowSpec{3, 3, 3, shared_arrival()}});
}

}  // namespace

Mmp shared_arrival() { return Mmp::on_off(0.7, 0.1, Poisson{2.0}); }

TandemNetwork fig1a(double p, double q) {
  return TandemNetwork({MarkovService{Mmp::single_state(ScaledBernoulli{5.0, p})},
                        MarkovService{Mmp::single_state(ScaledBernoulli{6.0, q})}},
                       {FlowSpec{1, 1, 2, shared_arrival()}});
}

TandemNetwork fig1b(double c2) {
  return TandemNetwork({ConstantRate{5.0}, ConstantRate{c2}, ConstantRate{6.0}},
                       {FlowSpec{1, 1, 3, shared_arrival()}, FlowSpec{2, 1, 2, shared_arrival()},
                        FlowSpec{3, 2, 3, shared_arrival()}});
}

TandemNetwork sinktree_up() { return sinktree(4.0, 5.0, 6.0); }

TandemNetwork sinktree_down() { return sinktree(2.0, 5.0, 8.0); }

std::vector<std::string> names() { return {"fig1a", "fig1b", "sinktree_up", "sinktree_down"}; }

bool is_name(const std::string& name) {
  const auto n = names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

TandemNetwork by_name(const std::string& name) {
  if (name == "fig1a") return fig1a();
  if (name == "fig1b") return fig1b();
  if (name == "sinktree_up") return sinktree_up();
  if (name == "sinktree_down") return sinktree_down();
  throw std::invalid_argument("unknown corpus network '" + name + "'");
}

}  // namespace snc::corpus
