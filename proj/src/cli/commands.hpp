#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ptlab::cli {

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

struct SynthArgs {
    std::string family;
    std::string grid;
    std::string point;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double span = 40.0;
    double step = 0.01;
    std::string out;
    int jobs = 0;
};

struct FitArgs {
    std::string manifest;
    std::vector<std::string> inputs;
    std::string out;
    std::string mask = "S11,S12,S21,S22";
    int n_starts = 8;
    int max_iterations = 200;
    double gradient_tolerance = 1e-10;
    double step_tolerance = 1e-12;
    double damping_init = 1e-3;
    std::uint64_t seed = 1;
    std::string jacobian = "analytic";
    bool no_early_stop = false;
    double max_failure_rate = 0.2;
    int jobs = 0;
};

struct ScanArgs {
    std::string family;
    std::string manifest;
    std::string grid;
    std::string out;
    FitArgs fit;
    int jobs = 0;
};

struct EpArgs {
    std::string in;
    std::string family;
    std::string grid;
    std::string out;
};

struct CurveArgs {
    std::string in;
    std::string family;
    std::string grid;
    std::string start;
    double step = 0.01;
    double eps_curve = 0.0;  // 0: 1e-9 family-direct, 1e-3 fitted
    int direction = 1;
    std::string out;
};

struct PtArgs {
    std::string curve;
    std::string offset_mode = "local";
    double eps_cross = 1e-6;
    double eps_pt = 1e-8;
    double phase_tol = 1e-9;
    std::string out;
};

struct BraidArgs {
    std::string in;
    std::string family;
    std::string grid;
    std::string center = "ep";
    double radius = 0.1;
    std::string shape = "square";
    int points = 64;
    int turns = 1;
    std::string out;
};

struct FamilyArgs {
    std::string name;
    std::string out;
    bool list = false;
};

int cmd_synth(const SynthArgs& a, Streams io);
int cmd_fit(const FitArgs& a, Streams io);
int cmd_analyze_scan(const ScanArgs& a, Streams io);
int cmd_analyze_ep(const EpArgs& a, Streams io);
int cmd_analyze_curve(const CurveArgs& a, Streams io);
int cmd_analyze_pt(const PtArgs& a, Streams io);
int cmd_analyze_braid(const BraidArgs& a, Streams io);
int cmd_family(const FamilyArgs& a, Streams io);

/// Default output root: $PTLAB_OUTPUT_ROOT if set, else the working directory.
std::filesystem::path output_root();

}  // namespace ptlab::cli
