#include "dftidx/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dftidx {

void validate(const GenSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("count must be at least 1");
    if (spec.length < 4) throw std::invalid_argument("length must be at least 4");
    if (!(spec.step_bound > 0.0) || !std::isfinite(spec.step_bound)) {
        throw std::invalid_argument("step bound must be positive");
    }
    if (!(spec.exponent >= 0.0) || !std::isfinite(spec.exponent)) {
        throw std::invalid_argument("spectral exponent must be non-negative");
    }
}

namespace {

std::mt19937_64 stream_for(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
    return std::mt19937_64(seq);
}

template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
    const auto n = static_cast<std::ptrdiff_t>(count);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    }
}

TimeSequence one_random_walk(const GenSpec& spec, std::size_t index) {
    auto rng = stream_for(spec.seed, index);
    // Closed interval [-B, B].
    std::uniform_real_distribution<double> step(
        -spec.step_bound, std::nextafter(spec.step_bound, std::numeric_limits<double>::infinity()));
    TimeSequence seq{"rw" + std::to_string(index), std::vector<double>(spec.length)};
    double x = 0.0;
    for (auto& v : seq.values) {
        x += step(rng);
        v = x;
    }
    return seq;
}

TimeSequence one_spectral_noise(const GenSpec& spec, std::size_t index) {
    auto rng = stream_for(spec.seed, index);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const std::size_t n = spec.length;
    const std::size_t top = n / 2;  // == ceil((n-1)/2)
    std::vector<Complex> spectrum(n, Complex{0.0, 0.0});
    for (std::size_t f = 1; f <= top; ++f) {
        const double amp = std::pow(static_cast<double>(f), -spec.exponent);
        if (2 * f == n) {
            // The Nyquist coefficient of a real signal is real.
            spectrum[f] = Complex(std::cos(phase(rng)) >= 0.0 ? amp : -amp, 0.0);
        } else {
            spectrum[f] = std::polar(amp, phase(rng));
            spectrum[n - f] = std::conj(spectrum[f]);
        }
    }
    const auto signal = inverse_dft(spectrum);
    TimeSequence seq{"sn" + std::to_string(index), std::vector<double>(n)};
    for (std::size_t t = 0; t < n; ++t) {
        if (std::abs(signal[t].imag()) > 1e-9) {
            throw std::logic_error("spectral noise synthesis left an imaginary residue");
        }
        seq.values[t] = signal[t].real();
    }
    return seq;
}

}  // namespace

std::vector<TimeSequence> random_walk(const GenSpec& spec, Execution exec) {
    validate(spec);
    if (spec.kind != GenKind::RandomWalk) throw std::invalid_argument("spec is not a random walk");
    std::vector<TimeSequence> out(spec.count);
    for_each_index(spec.count, exec, [&](std::size_t i) { out[i] = one_random_walk(spec, i); });
    return out;
}

std::vector<TimeSequence> spectral_noise(const GenSpec& spec, Execution exec) {
    validate(spec);
    if (spec.kind != GenKind::SpectralNoise) {
        throw std::invalid_argument("spec is not spectral noise");
    }
    std::vector<TimeSequence> out(spec.count);
    for_each_index(spec.count, exec, [&](std::size_t i) { out[i] = one_spectral_noise(spec, i); });
    return out;
}

std::vector<TimeSequence> generate(const GenSpec& spec, Execution exec) {
    return spec.kind == GenKind::RandomWalk ? random_walk(spec, exec) : spectral_noise(spec, exec);
}

CsvLayout parse_layout(const std::string& name) {
    if (name == "rows") return CsvLayout::Rows;
    if (name == "long") return CsvLayout::Long;
    throw std::invalid_argument("unknown CSV layout '" + name + "' (expected rows or long)");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view field, const std::string& source, std::size_t line) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        fail(source, line, "cannot parse '" + std::string(field) + "' as a number");
    }
    if (!std::isfinite(v)) fail(source, line, "non-finite value '" + std::string(field) + "'");
    return v;
}

long long parse_index(std::string_view field, const std::string& source, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() || v < 0) {
        fail(source, line, "cannot parse '" + std::string(field) + "' as a time index");
    }
    return v;
}

bool is_header(const std::vector<std::string_view>& fields) {
    if (fields.empty()) return false;
    std::string first(fields.front());
    std::transform(first.begin(), first.end(), first.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return first == "id";
}

}  // namespace

IngestResult parse_csv(std::istream& in, const IngestOptions& options, const std::string& source) {
    std::vector<TimeSequence> seqs;
    std::unordered_map<std::string, std::size_t> index_of;
    // Long layout: per sequence, time index -> value.
    std::vector<std::map<long long, double>> long_values;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (line_no == 1 && is_header(fields)) continue;
        const std::string id(fields.front());
        if (id.empty()) fail(source, line_no, "missing sequence id");

        if (options.layout == CsvLayout::Rows) {
            if (fields.size() < 2) fail(source, line_no, "row has no values");
            if (index_of.contains(id)) fail(source, line_no, "duplicate sequence id '" + id + "'");
            TimeSequence seq{id, {}};
            seq.values.reserve(fields.size() - 1);
            for (std::size_t i = 1; i < fields.size(); ++i) {
                seq.values.push_back(parse_real(fields[i], source, line_no));
            }
            index_of.emplace(id, seqs.size());
            seqs.push_back(std::move(seq));
        } else {
            if (fields.size() != 3) fail(source, line_no, "expected id,t,value");
            const auto t = parse_index(fields[1], source, line_no);
            const double v = parse_real(fields[2], source, line_no);
            auto [it, fresh] = index_of.emplace(id, seqs.size());
            if (fresh) {
                seqs.push_back(TimeSequence{id, {}});
                long_values.emplace_back();
            }
            if (!long_values[it->second].emplace(t, v).second) {
                fail(source, line_no, "duplicate time index " + std::to_string(t) + " for '" + id + "'");
            }
        }
    }
    if (options.layout == CsvLayout::Long) {
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            for (const auto& [t, v] : long_values[i]) seqs[i].values.push_back(v);
        }
    }

    IngestResult result;
    for (auto& s : seqs) {
        if (s.length() < options.min_length) {
            result.rejected.push_back({s.id, "length " + std::to_string(s.length()) +
                                                 " below minimum " +
                                                 std::to_string(options.min_length)});
        } else {
            result.sequences.push_back(std::move(s));
        }
    }
    if (result.sequences.empty()) return result;

    const auto [shortest, longest] = std::minmax_element(
        result.sequences.begin(), result.sequences.end(),
        [](const TimeSequence& a, const TimeSequence& b) { return a.length() < b.length(); });
    if (shortest->length() != longest->length() || (options.truncate_to_min && options.min_length > 0)) {
        if (!options.truncate_to_min) {
            throw std::runtime_error(source + ": ragged sequence lengths (" +
                                     std::to_string(shortest->length()) + " to " +
                                     std::to_string(longest->length()) +
                                     "); pass truncate-to-min to cut them to a common length");
        }
        const std::size_t target = options.min_length > 0 ? options.min_length : shortest->length();
        for (auto& s : result.sequences) s.values.resize(target);
    }
    return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return parse_csv(in, options, path.string());
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("to_chars failed");
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, std::span<const TimeSequence> seqs, CsvLayout layout) {
    for (const auto& s : seqs) {
        if (layout == CsvLayout::Rows) {
            out << s.id;
            for (double v : s.values) out << ',' << format_double(v);
            out << '\n';
        } else {
            for (std::size_t t = 0; t < s.values.size(); ++t) {
                out << s.id << ',' << t << ',' << format_double(s.values[t]) << '\n';
            }
        }
    }
}

void export_csv(const std::filesystem::path& path, std::span<const TimeSequence> seqs,
                CsvLayout layout) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_csv(out, seqs, layout);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace dftidx
