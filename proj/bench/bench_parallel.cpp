// Times operator-matrix assembly: OpenMP column-parallel entry point against
// the serial reference, on the largest word-spaces of a level. The two
// builds must agree to machine precision; timing differences are reported,
// never asserted (single-core machines are fine).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "su3paths/operators.hpp"

using namespace su3paths;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// All-sigma words keep every consuming operator applicable at mid-word.
Word straight(int len) { return Word(len, Orientation::sigma); }

}  // namespace

int main(int argc, char** argv) {
  const int level = argc > 1 ? std::atoi(argv[1]) : 3;
  const int length = argc > 2 ? std::atoi(argv[2]) : 7;
  const int rounds = argc > 3 ? std::atoi(argv[3]) : 3;

  auto g = std::make_shared<Graph>(Graph::a_series(level));
  CellSystem cs = solve_cells_a_series(g, perron_data(*g));

  // Unrestricted-end spaces are the biggest; collect the heaviest few.
  struct Case {
    SpaceSignature sig;
    OperatorSpec spec;
    const char* name;
  };
  std::vector<Case> cases;
  Word w = straight(length);
  for (VertexId a = 0; a < g->vertex_count(); ++a) {
    auto paths = enumerate_paths(*g, a, w);
    if (paths.empty()) continue;
    for (const auto& p : paths) {
      SpaceSignature sig{a, p.vertices.back(), w};
      if (!cases.empty() && cases.back().sig == sig) continue;
      cases.push_back({sig, {OpKind::tl_u, length / 2 + 1}, "tl_u"});
      cases.push_back({sig, {OpKind::cap, length / 2 + 1, Variant::forward}, "cap"});
      break;  // one end per start keeps the run short
    }
  }

  std::printf("level %d, word length %d, %zu spaces, %d rounds\n", level, length, cases.size(),
              rounds);
  double total_par = 0.0, total_ser = 0.0, worst = 0.0;
  for (const auto& c : cases) {
    OperatorMatrix par, ser;
    auto t0 = Clock::now();
    for (int r = 0; r < rounds; ++r) par = operator_matrix(cs, c.spec, c.sig);
    const double tp = ms_since(t0) / rounds;
    t0 = Clock::now();
    for (int r = 0; r < rounds; ++r) ser = operator_matrix_serial(cs, c.spec, c.sig);
    const double ts = ms_since(t0) / rounds;
    total_par += tp;
    total_ser += ts;
    const double dev = (par.mat - ser.mat).norm();
    worst = dev > worst ? dev : worst;
    std::printf("  %-4s %4ld x %-4ld  parallel %8.2f ms  serial %8.2f ms  |diff| %.1e\n", c.name,
                (long)par.mat.rows(), (long)par.mat.cols(), tp, ts, dev);
  }
  std::printf("totals: parallel %.2f ms, serial %.2f ms, max build difference %.1e\n", total_par,
              total_ser, worst);
  return worst < 1e-12 ? 0 : 1;
}
