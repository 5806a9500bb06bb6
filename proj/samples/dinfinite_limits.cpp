// Ball-sequence dc and cr on the infinite dihedral group, both tending to 1/4.

#include <cstdio>

#include "dcgroup/dcgroup.hpp"

int main() {
  dcg::Group g = dcg::parse_group("dinf");
  dcg::MeasureSeqSpec balls{dcg::BallUniformSeq{g.default_genset()}};
  dcg::NRange range(10, 200);
  auto dc = dcg::dc_sequence(balls, range, 20);
  auto cr = dcg::cr_sequence(balls, range, 20);
  std::printf("%5s %10s %10s\n", "n", "dc", "cr");
  for (std::size_t i = 0; i < dc.points.size(); i += 10) {
    std::printf("%5zu %10.6f %10.6f\n", dc.points[i].n, dc.points[i].value.to_double(),
                cr.points[i].cr_value.to_double());
  }
  std::printf("tail dc in [%.6f, %.6f], cr in [%.6f, %.6f], lower bound %s\n", dc.tail_min.to_double(),
              dc.tail_max.to_double(), cr.tail_min.to_double(), cr.tail_max.to_double(),
              dcg::cr_lower_bound(2, 1).get_str().c_str());
}
