// Reach of the butterfly curve three ways, plus an SVG with the medial axis
// and the narrowest bottleneck.
//
//   butterfly_reach [out.svg]

#include <cstdio>
#include <fstream>

#include "mcl/mcl.hpp"

int main(int argc, char** argv) {
  using namespace mcl;
  const Curve c = Curve::parse("x^4 - x^2*y^2 + y^4 - 4*x^2 - 2*y^2 - x - 4*y + 1");
  const BoundingBox box{-3, 3, -3, 3};
  try {
    for (double eps : {0.05, 0.02, 0.01}) {
      const Sample A = epsilon_sample(c, box, eps);
      const ReachReport r = reach_exact(c, A);
      std::printf("eps %.3f  n %5zu  q %.5f  rho %.5f  tau %.5f  voronoi %.5f  delaunay %.5f\n", eps, A.size(), r.q,
                  r.rho, r.tau_exact, r.tau_voronoi, r.tau_delaunay);
    }
    if (argc > 1) {
      RenderOptions opt;
      opt.layers = {"curve", "medial", "bottlenecks", "critical", "sample"};
      std::ofstream(argv[1]) << render_svg(c, epsilon_sample(c, box, 0.05), box, opt);
      std::printf("wrote %s\n", argv[1]);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", e.kind(), e.what());
    return 1;
  }
  return 0;
}
