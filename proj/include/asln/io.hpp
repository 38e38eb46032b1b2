#pragma once

#include "asln/encoders.hpp"
#include "asln/generative.hpp"
#include "asln/types.hpp"

#include <string>

namespace asln::io {

// Binary container, little-endian throughout:
//   magic   "ASLN1"                      (5 bytes)
//   kind    u8: 0 process, 1 batch, 2 weights
//   nl tag  u8 (0 sign, 1 cube, 2 relu, 3 tanh, 4 identity)
//   src tag u8 (0 uniform, 1 truncated-normal, 2 gaussian)
//   seed    u64
//   dims    u64 ns, nf, nx, T            (T = 0 unless a batch)
//   count   u32 section count
// then per section: 4-byte tag, u64 rows, u64 cols, rows*cols f64 row-major.
// Section tags: AMAT AOFF BMAT SMAT FMAT XMAT MEAN WPCA WICA EIGV.

void write_process(const GenerativeProcess& p, const std::string& path);
GenerativeProcess read_process(const std::string& path);

void write_batch(const GenerativeProcess& p, const SampleBatch& b, const std::string& path);
SampleBatch read_batch(const std::string& path);

void write_weights(const encoders::PcaEncoder& pca, const encoders::IcaEncoder& ica,
                   const std::string& path);
void read_weights(const std::string& path, encoders::PcaEncoder& pca,
                  encoders::IcaEncoder& ica);

/// Format a double with 17 significant digits (round-trip exact); NaN is
/// always spelled "nan".
std::string format_double(double v);

}  // namespace asln::io
