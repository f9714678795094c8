// Regenerates tests/fixtures/functionals.txt from the slow reference
// integrator. Run once; the file is checked in with its checksum.

#include <iostream>

#include "icflow/verify.hpp"
#include "support/oracle.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "tests/fixtures/functionals.txt";
  std::vector<icflow::FixtureRecord> recs;
  for (const auto& sp : oracle::fixture_matrix()) {
    for (int k = 1; k <= sp.n - 1; ++k) {
      const auto f = oracle::integrate_shape(sp, k);
      icflow::FixtureRecord r;
      r.shape = sp.describe();
      r.n = sp.n;
      r.k = k;
      r.I_H = f.I_H;
      r.I_r2Hk = f.I_r2Hk;
      r.vol = f.vol;
      std::cout << r.shape << " k=" << k << "\n";
      recs.push_back(std::move(r));
    }
  }
  icflow::save_fixtures(path, recs);
  std::cout << recs.size() << " records -> " << path << "\n";
  return 0;
}
