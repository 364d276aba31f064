// Times the serial reference against the OpenMP kernels on a generated
// corpus and verifies the outputs are bit-identical.
//
//   bench_pipeline [rows] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "eflight/aircraft.hpp"
#include "eflight/corpus.hpp"
#include "eflight/emissions.hpp"
#include "eflight/fuel_curves.hpp"
#include "eflight/schedule.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace eflight;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count() / 1e6;
}

std::string data_path(const std::string& name) {
    return std::string(EFLIGHT_DATA_DIR) + "/" + name;
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t rows = argc > 1 ? std::atoll(argv[1]) : 2'000'000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

    auto registry = AircraftRegistry::load_file(data_path("aircraft.csv"));
    ModelParameters params;
    auto curves = CurveSet::fit_from_points_file(data_path("fuel_points.csv"), params);
    auto grids = GridTable::load_file(data_path("grid.csv"));
    LabelLists lists;
    lists.uncommon_models = LabelLists::load_list_file(data_path("uncommon_models.txt"));
    lists.ambiguous_labels = LabelLists::load_list_file(data_path("deny_labels.txt"));

    std::vector<std::string> countries;
    for (const auto& p : grids.profiles()) countries.push_back(p.country);

    CorpusSpec spec;
    spec.seed = 7;
    spec.rows = rows;
    std::stringstream corpus;
    auto t0 = Clock::now();
    generate_corpus(spec, registry, countries, params.short_haul_nm, corpus);
    std::printf("generated %lld rows in %.3f s\n", static_cast<long long>(rows),
                seconds_since(t0));

    t0 = Clock::now();
    auto in = ingest(corpus);
    std::printf("ingested  %zu records in %.3f s (%zu diagnostics)\n", in.records.size(),
                seconds_since(t0), in.diagnostics.size());

#ifdef _OPENMP
    std::printf("openmp    enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp    not available; the parallel path falls back to serial\n");
#endif

    FilterResult serial_filtered, parallel_filtered;
    for (auto mode : {Execution::Serial, Execution::Parallel}) {
        const char* name = mode == Execution::Serial ? "serial  " : "parallel";
        double best = 1e30;
        FilterResult result;
        for (int r = 0; r < repeats; ++r) {
            t0 = Clock::now();
            result = filter_commercial(in.records, registry, lists, params.short_haul_nm, mode);
            best = std::min(best, seconds_since(t0));
        }
        std::printf("filter    %s: best of %d: %.3f s (%lld flights kept)\n", name, repeats, best,
                    static_cast<long long>(result.stats.kept));
        (mode == Execution::Serial ? serial_filtered : parallel_filtered) = std::move(result);
    }
    if (!(serial_filtered.stats == parallel_filtered.stats &&
          serial_filtered.kept == parallel_filtered.kept)) {
        std::printf("FAIL: serial and parallel filter outputs differ\n");
        return 1;
    }

    EmissionsLedger serial_ledger(std::vector<CountryLedgerRow>{}), parallel_ledger(std::vector<CountryLedgerRow>{});
    for (auto mode : {Execution::Serial, Execution::Parallel}) {
        const char* name = mode == Execution::Serial ? "serial  " : "parallel";
        double best = 1e30;
        for (int r = 0; r < repeats; ++r) {
            t0 = Clock::now();
            auto ledger =
                build_ledger(serial_filtered.kept, curves, grids, params, nullptr, mode);
            best = std::min(best, seconds_since(t0));
            (mode == Execution::Serial ? serial_ledger : parallel_ledger) = std::move(ledger);
        }
        std::printf("ledger    %s: best of %d: %.3f s\n", name, repeats, best);
    }
    if (!(serial_ledger == parallel_ledger)) {
        std::printf("FAIL: serial and parallel ledgers differ\n");
        return 1;
    }
    std::printf("serial and parallel outputs are bit-identical (%zu countries)\n",
                serial_ledger.rows().size());
    return 0;
}
