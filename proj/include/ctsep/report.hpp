#pragma once

#include <string>

#include "ctsep/grid.hpp"

namespace ctsep {

// Field binary format: magic "MSF1", u32 LE grid N, u8 domain tag
// (0 = space, 1 = frequency), then N^2 complex samples as LE f64
// (real, imag) pairs, row-major by increasing sample coordinate.
void write_field(const std::string& path, const Array2c& f);
Array2c read_field(const std::string& path);

// 8-bit grayscale PNG of the real part, linearly normalized; returns the
// normalization scale (max |Re|) so the picture can be interpreted.
double write_png_gray(const std::string& path, const Field& f);

struct SweepRecord {
  int j = 0;
  int s = 0;
  double norm_c2 = 0;   // ||C_j||_2^2
  double norm_t2 = 0;   // ||T_j||_2^2
  double delta1 = 0, delta2 = 0;
  double muc1 = 0, muc2 = 0;
  double rel_error = 0;
  double prop_bound = 0;  // infinity when mu_c >= 1/2
  int iters = 0;
  double wall_ms = 0;
  bool solver_converged = true;
};

// CSV schema: j,s_j,norm_C2,norm_T2,delta1,delta2,muc1,muc2,rel_error,
// prop_bound,iters,wall_ms
std::string records_to_csv(const std::vector<SweepRecord>& records);
std::string records_to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace ctsep
