#include <sstream>
#include <string>
#include <vector>

#include "slcpopt/formats.hpp"

namespace slcpopt {

// Standard-form primal: min c.x s.t. sum_i x_i F_i - F0 block-diagonal PSD.
// Affine PSD blocks map directly; nonnegative rows become entries of one
// trailing diagonal block; equality rows become opposing inequality pairs.
// The objective offset has no SDPA encoding and is dropped.
std::string export_sdpa(const ConicProgram& prog) {
  if (prog.has_exp())
    throw UnsupportedConeError("sdpa export supports only PSD and scalar cones");

  const auto& rows = prog.rows();
  const int m = prog.num_vars();

  struct DiagRow {
    const LinExpr* e;
    double sign;
  };
  std::vector<const ConeBlock*> psd_blocks;
  std::vector<DiagRow> diag;
  for (const auto& blk : prog.blocks()) {
    if (blk.type == ConeType::Psd) {
      psd_blocks.push_back(&blk);
    } else {
      for (int r = 0; r < blk.row_count; ++r) {
        const LinExpr* e = &rows[blk.row_start + r];
        diag.push_back({e, 1.0});
        if (blk.type == ConeType::Zero) diag.push_back({e, -1.0});
      }
    }
  }

  std::ostringstream os;
  os << m << "\n";
  int n_block = static_cast<int>(psd_blocks.size()) + (diag.empty() ? 0 : 1);
  os << n_block << "\n";
  for (size_t b = 0; b < psd_blocks.size(); ++b) {
    if (b) os << " ";
    os << psd_blocks[b]->dim;
  }
  if (!diag.empty()) {
    if (!psd_blocks.empty()) os << " ";
    os << "-" << diag.size();
  }
  os << "\n";

  const auto& c = prog.objective();
  for (int v = 0; v < m; ++v) {
    if (v) os << " ";
    os << format_double(v < static_cast<int>(c.size()) ? c[v] : 0.0);
  }
  os << "\n";

  // matno 0 holds F0 = -(constant part); matno v holds the coefficients of
  // variable v-1. Entries are 1-based upper triangle, zeros omitted.
  auto emit = [&](int matno, int block, int i, int j, double val) {
    if (val == 0.0) return;
    os << matno << " " << block << " " << i << " " << j << " " << format_double(val)
       << "\n";
  };

  for (int matno = 0; matno <= m; ++matno) {
    for (size_t b = 0; b < psd_blocks.size(); ++b) {
      const ConeBlock& blk = *psd_blocks[b];
      int idx = 0;
      for (int i = 0; i < blk.dim; ++i) {
        for (int j = i; j < blk.dim; ++j, ++idx) {
          const LinExpr& e = rows[blk.row_start + idx];
          double val = 0.0;
          if (matno == 0) {
            val = -e.c0;
          } else {
            for (const auto& [var, coef] : e.terms)
              if (var == matno - 1) val += coef;
          }
          emit(matno, static_cast<int>(b) + 1, i + 1, j + 1, val);
        }
      }
    }
    if (!diag.empty()) {
      int block = static_cast<int>(psd_blocks.size()) + 1;
      for (size_t r = 0; r < diag.size(); ++r) {
        double val = 0.0;
        if (matno == 0) {
          val = -diag[r].sign * diag[r].e->c0;
        } else {
          for (const auto& [var, coef] : diag[r].e->terms)
            if (var == matno - 1) val += diag[r].sign * coef;
        }
        emit(matno, block, static_cast<int>(r) + 1, static_cast<int>(r) + 1, val);
      }
    }
  }

  return os.str();
}

}  // namespace slcpopt
