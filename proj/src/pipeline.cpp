#include "soundscape/pipeline.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "soundscape/errors.hpp"
#include "soundscape/log.hpp"

namespace soundscape {

namespace {

struct FileResult {
  bool processed = false;
  bool header_emitted = false;
  std::string skip_reason;
  FileHeader header;
  std::uint64_t records = 0;
  std::uint64_t segments_skipped = 0;
  std::exception_ptr fatal;
};

std::string serialize_record(const MetricRecord& record, OutputFormat format) {
  return format == OutputFormat::ndjson ? to_ndjson(record) : to_csv_row(record);
}

SpectralResult analyze_segment(const Eigen::Ref<const Eigen::ArrayXd>& segment,
                               const Eigen::ArrayXd& window,
                               const SegmentationConfig& seg, double sample_rate,
                               const std::optional<TolBandSet>& bands) {
  const Eigen::ArrayXXd frames = apply_window(
      frame_segment(segment, seg.window_size, seg.window_overlap), window);
  const Eigen::ArrayXXd psds = psd_matrix(frames, window, seg.nfft, sample_rate);

  SpectralResult result;
  result.welch = welch(psds);
  result.spl_db = spl(result.welch);
  if (bands) result.tol_db = tol(psds, *bands);
  return result;
}

// Streams one file: decode -> calibrate -> segment -> analyze, pushing one
// serialized row per segment through `sink`. All skip-worthy validation runs
// before `on_header`; anything thrown later means output was already started
// and the caller must treat it as fatal.
void process_file(const AudioFileDescriptor& listed, const PipelineConfig& config,
                  const std::function<void(const FileHeader&)>& on_header,
                  const std::function<void(const std::string&)>& sink,
                  FileResult& result) {
  WavReader reader(config.audio_dir / listed.name);

  AudioFileDescriptor desc = listed;
  reader.describe(desc);
  const double fs = desc.sample_rate;
  const SegmentationConfig seg = config.segmentation();

  const Eigen::Index segment_size = segment_size_for(config.segment_duration, fs);
  if (segment_size < 1)
    throw ConfigError("segment_duration * sample_rate is below one sample");

  std::optional<TolBandSet> bands;
  if (config.tol_enabled) {
    check_tol_signal_length(desc.n_samples, fs);
    bands = tol_bands(fs, seg.nfft, config.tol_low_freq, config.tol_high_freq);
  }

  const Eigen::ArrayXd window = make_window(seg.window_kind, seg.window_size);

  FileHeader header;
  header.source = desc;
  header.segmentation = seg;
  header.frequency_step = fs / static_cast<double>(seg.nfft);
  header.spectrum_bins = spectrum_size(seg.nfft);
  header.bands = bands;
  result.header = header;
  // From here on errors are fatal, not skips: the sink may hold bytes for
  // this file already, and writer-side failures must stop the run.
  result.header_emitted = true;
  on_header(header);

  // Whole-file mode: when segments are no longer than one analysis window,
  // the file itself is the single segment and only window-level framing runs.
  const bool whole_file = segment_size <= seg.window_size;
  const std::uint64_t n_segments =
      whole_file ? 1 : desc.n_samples / static_cast<std::uint64_t>(segment_size);
  const Eigen::Index read_size =
      whole_file ? static_cast<Eigen::Index>(desc.n_samples) : segment_size;

  Eigen::ArrayXd chunk(read_size);
  for (std::uint64_t s = 0; s < n_segments; ++s) {
    const Eigen::Index got = reader.read(chunk);
    if (got != read_size)
      throw CorruptFileError(listed.name + ": short read inside data chunk");
    const Eigen::ArrayXd calibrated = apply_sensitivity(chunk, config.sensitivity_db);

    if (frame_count(calibrated.size(), seg.window_size, seg.window_overlap) == 0) {
      // Shorter than one analysis window; truncated material is dropped.
      ++result.segments_skipped;
      continue;
    }

    MetricRecord record;
    record.file = listed.name;
    record.segment_index = static_cast<std::int64_t>(s);
    record.timestamp = listed.start_instant.plus_seconds(
        static_cast<double>(s) * config.segment_duration);
    record.result = analyze_segment(calibrated, window, seg, fs, bands);
    sink(serialize_record(record, config.format));
    ++result.records;
  }
  result.processed = true;
}

// Main-thread writer enforcing output order and CSV dimension homogeneity.
class OutputWriter {
 public:
  OutputWriter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  void begin_file(const FileHeader& header) {
    if (format_ == OutputFormat::ndjson) {
      out_ << to_ndjson(header) << '\n';
    } else if (!wrote_columns_) {
      out_ << csv_column_row(header) << '\n';
      reference_ = header;
      wrote_columns_ = true;
    } else if (header.spectrum_bins != reference_.spectrum_bins ||
               header.frequency_step != reference_.frequency_step ||
               header.bands.has_value() != reference_.bands.has_value() ||
               (header.bands && header.bands->size() != reference_.bands->size())) {
      // Wide CSV shares one column row, so every file must sit on the same
      // frequency axis. NDJSON has no such restriction.
      throw ConfigError("csv output needs one shared frequency axis across the "
                        "corpus; " +
                        header.source.name + " differs from " +
                        reference_.source.name);
    }
    check();
  }

  void write_row(const std::string& row) {
    out_ << row << '\n';
    check();
  }

 private:
  void check() const {
    if (!out_) throw Error("writing output failed");
  }

  std::ostream& out_;
  OutputFormat format_;
  bool wrote_columns_ = false;
  FileHeader reference_;
};

std::filesystem::path make_spool_dir() {
  std::mt19937_64 rng(std::random_device{}());
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto dir = base / ("soundscape-spool-" + std::to_string(rng()));
    std::error_code ec;
    if (std::filesystem::create_directory(dir, ec)) return dir;
  }
  throw Error("cannot create spool directory under " +
              std::filesystem::temp_directory_path().string());
}

void splice_file(std::ostream& out, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot reopen spool file " + path.string());
  out << in.rdbuf();
  in.close();
  if (!out) throw Error("writing output failed");
}

void note_skip(RunSummary& summary, const std::string& file, const std::string& why) {
  ++summary.files_skipped;
  summary.skips.emplace_back(file, why);
  log::error(file + ": skipped (" + why + ")");
}

void account(RunSummary& summary, const FileResult& result) {
  ++summary.files_processed;
  summary.records_emitted += result.records;
  summary.segments_skipped += result.segments_skipped;
}

}  // namespace

RunSummary run(const PipelineConfig& config_in) {
  PipelineConfig config = config_in;
  config.finalize();

  if (config.tol_enabled && config.segment_duration < 30.0 && config.tol_low_freq < 25.0) {
    char duration[32];
    std::snprintf(duration, sizeof(duration), "%g", config.segment_duration);
    log::warn("third-octave bands below 25 Hz need segments of at least 30 s for "
              "accurate levels; segment_duration is " +
              std::string(duration) + " s");
  }

  std::ifstream metadata_in(config.metadata_path);
  if (!metadata_in)
    throw ConfigError("cannot read metadata CSV " + config.metadata_path.string());
  std::ostringstream metadata_text;
  metadata_text << metadata_in.rdbuf();
  const std::vector<AudioFileDescriptor> files = parse_metadata(metadata_text.str());

  std::ofstream out(config.output_path, std::ios::binary);
  if (!out)
    throw ConfigError("cannot open output file " + config.output_path.string());
  OutputWriter writer(out, config.format);

  RunSummary summary;
  summary.files_listed = files.size();
  const std::size_t n_files = files.size();
  const unsigned n_workers = static_cast<unsigned>(
      std::min<std::size_t>(config.worker_count, std::max<std::size_t>(n_files, 1)));

  if (n_workers <= 1) {
    for (const auto& file : files) {
      FileResult result;
      try {
        process_file(
            file, config, [&](const FileHeader& h) { writer.begin_file(h); },
            [&](const std::string& row) { writer.write_row(row); }, result);
      } catch (const Error& e) {
        if (result.header_emitted) throw;  // output already started
        note_skip(summary, file.name, e.what());
        continue;
      }
      account(summary, result);
    }
    out.flush();
    if (!out) throw Error("writing output failed");
    return summary;
  }

  // Parallel path: workers analyze whole files into per-file spool files and
  // the main thread splices them back in CSV order. Output bytes match the
  // sequential path and memory stays bounded by segment size.
  const auto spool_dir = make_spool_dir();
  struct SpoolGuard {
    std::filesystem::path dir;
    ~SpoolGuard() {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  } spool_guard{spool_dir};

  auto spool_path = [&](std::size_t index) {
    return spool_dir / (std::to_string(index) + ".part");
  };

  std::vector<std::optional<FileResult>> results(n_files);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t index = next.fetch_add(1);
      if (index >= n_files) return;
      FileResult result;
      try {
        std::ofstream spool;
        process_file(
            files[index], config,
            [&](const FileHeader&) {
              spool.open(spool_path(index), std::ios::binary);
              if (!spool) throw Error("cannot open spool file");
            },
            [&](const std::string& row) {
              spool << row << '\n';
              if (!spool) throw Error("writing spool file failed");
            },
            result);
      } catch (const Error& e) {
        if (result.header_emitted) {
          result.fatal = std::current_exception();
        } else {
          result = FileResult{};
          result.skip_reason = e.what();
        }
      } catch (...) {
        result.fatal = std::current_exception();
      }
      {
        std::lock_guard lock(mutex);
        results[index] = std::move(result);
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (unsigned i = 0; i < n_workers; ++i) threads.emplace_back(worker);

  std::exception_ptr fatal;
  for (std::size_t index = 0; index < n_files && !fatal; ++index) {
    FileResult result;
    {
      std::unique_lock lock(mutex);
      ready.wait(lock, [&] { return results[index].has_value(); });
      result = std::move(*results[index]);
      results[index].reset();
    }
    try {
      if (result.fatal) std::rethrow_exception(result.fatal);
      if (!result.processed) {
        note_skip(summary, files[index].name, result.skip_reason);
      } else {
        writer.begin_file(result.header);
        splice_file(out, spool_path(index));
        account(summary, result);
      }
      std::error_code ec;
      std::filesystem::remove(spool_path(index), ec);
    } catch (...) {
      fatal = std::current_exception();
      next.store(n_files);  // stop handing out new work
    }
  }
  for (auto& thread : threads) thread.join();
  if (fatal) std::rethrow_exception(fatal);

  out.flush();
  if (!out) throw Error("writing output failed");
  return summary;
}

}  // namespace soundscape
