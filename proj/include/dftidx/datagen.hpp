#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dftidx/kernels.hpp"
#include "dftidx/signal.hpp"

namespace dftidx {

enum class GenKind { RandomWalk, SpectralNoise };

struct GenSpec {
    GenKind kind = GenKind::RandomWalk;
    std::size_t count = 1;
    std::size_t length = 128;
    std::uint64_t seed = 1;
    double step_bound = 500.0;  // random walk: z_t uniform on [-B, B]
    double exponent = 1.0;      // spectral noise: |X_f| proportional to f^-b
};

/// Throws std::invalid_argument unless count >= 1, length >= 4, B > 0, b >= 0.
void validate(const GenSpec& spec);

/// x_0 = z_0, x_t = x_{t-1} + z_t. Sequence i draws from its own
/// std::mt19937_64 stream seeded by (seed, i), so output does not depend on
/// the execution mode. Ids are "rw<i>".
std::vector<TimeSequence> random_walk(const GenSpec& spec, Execution exec = Execution::Parallel);

/// Spectrum with |X_f| = f^-b for f = 1..ceil((n-1)/2), uniform random phases,
/// X_0 = 0 and a conjugate-symmetric upper half; returns its inverse
/// transform. Ids are "sn<i>".
std::vector<TimeSequence> spectral_noise(const GenSpec& spec,
                                         Execution exec = Execution::Parallel);

std::vector<TimeSequence> generate(const GenSpec& spec, Execution exec = Execution::Parallel);

enum class CsvLayout {
    Rows,  // id,v1,v2,...
    Long,  // id,t,value
};

CsvLayout parse_layout(const std::string& name);

struct IngestOptions {
    CsvLayout layout = CsvLayout::Rows;
    std::size_t min_length = 0;  // shorter sequences are rejected
    /// Cut ragged input down to a common length: min_length when set,
    /// otherwise the shortest surviving sequence.
    bool truncate_to_min = false;
};

struct Rejection {
    std::string id;
    std::string reason;
};

struct IngestResult {
    std::vector<TimeSequence> sequences;
    std::vector<Rejection> rejected;
};

/// A first line whose first field is "id" is treated as a header. Malformed
/// rows throw std::runtime_error naming the source and line number.
IngestResult parse_csv(std::istream& in, const IngestOptions& options,
                       const std::string& source = "<stream>");
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

void write_csv(std::ostream& out, std::span<const TimeSequence> seqs, CsvLayout layout);
void export_csv(const std::filesystem::path& path, std::span<const TimeSequence> seqs,
                CsvLayout layout);

}  // namespace dftidx
