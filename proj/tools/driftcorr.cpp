#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "drift/blur.hpp"
#include "drift/bootstrap.hpp"
#include "drift/estimator.hpp"
#include "drift/frames.hpp"
#include "drift/parallel.hpp"
#include "drift/simulate.hpp"
#include "drift/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace drift;

namespace {

constexpr const char* kVersion = "driftcorr 1.0.0";

std::uint64_t resolve_seed(CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("DRIFT_SEED")) {
        std::uint64_t v = 0;
        auto res = std::from_chars(env, env + std::strlen(env), v);
        if (res.ec == std::errc{}) return v;
        throw CLI::ValidationError("DRIFT_SEED", "not an unsigned integer");
    }
    return value;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& params,
                    const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = kVersion;
    m["command"] = command;
    m["parameters"] = params;
    m["outputs"] = outputs;
    std::vector<std::string> argv = {"driftcorr", command};
    for (auto& [key, value] : params.items()) {
        argv.push_back("--" + key);
        if (value.is_string())
            argv.push_back(value.get<std::string>());
        else
            argv.push_back(value.dump());
    }
    m["argv"] = argv;
    std::ofstream f(out_dir / "manifest.json");
    f << m.dump(2) << "\n";
}

void export_pgm(const fs::path& file, const Image& img) {
    double lo = img[0], hi = img[0];
    for (double v : img.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi > lo ? hi - lo : 1.0;
    std::ofstream f(file, std::ios::binary);
    f << "P5\n" << img.n() << " " << img.n() << "\n255\n";
    for (double v : img.data()) {
        unsigned char byte = static_cast<unsigned char>(std::lround(255.0 * (v - lo) / span));
        f.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

double default_cutoff(int T, int N, bool count_weighted, std::optional<double> xi) {
    if (xi) return *xi;
    if (count_weighted) return 0.2 * N;
    return std::ceil(std::sqrt(static_cast<double>(T)));
}

ContrastConfig make_contrast_config(const FrameStack& stack, const std::string& weights,
                                    std::optional<double> xi) {
    bool counts = weights == "counts";
    double cutoff = default_cutoff(stack.T, stack.N, counts, xi);
    if (counts) return ContrastConfig::count_weighted(cutoff, stack.counts);
    return ContrastConfig::uniform(cutoff);
}

NoiseModel parse_noise(const std::string& name, double sigma) {
    if (name == "gauss") return NoiseModel::gaussian(sigma);
    if (name == "t2") return NoiseModel::student_t2(sigma);
    if (name == "poisson") return NoiseModel::poisson();
    throw CLI::ValidationError("--noise", "expected gauss|t2|poisson");
}

// ---------------------------------------------------------------- simulate --

struct SimulateArgs {
    std::string image_path;
    int phantom_n = 0;
    std::string family = "linear";
    std::string theta;
    int T = 20;
    std::string noise = "gauss";
    double sigma = 0.1;
    std::uint64_t seed = 0;
    std::string out;
    bool stabilize = false;
    bool binary = false;
    bool pgm = false;
};

int run_simulate(const SimulateArgs& a) {
    SimulationSpec spec;
    spec.image = a.phantom_n > 0 ? filament_phantom(a.phantom_n) : read_grid_text(a.image_path);
    spec.drift = DriftParams(DriftFamily::parse(a.family), parse_theta(a.theta));
    spec.T = a.T;
    spec.noise = parse_noise(a.noise, a.sigma);
    spec.seed = a.seed;

    FrameStack stack = simulate_stack(spec);
    if (a.stabilize) stack = variance_stabilize(stack);

    fs::path out(a.out);
    fs::create_directories(out);
    std::vector<std::string> outputs;
    if (a.binary) {
        write_stack_binary(out / "stack.drft", stack);
        outputs.push_back("stack.drft");
    } else {
        write_stack_dir(out, stack);
        outputs.push_back("frame_*.txt");
        outputs.push_back("counts.txt");
    }
    if (a.pgm) {
        export_pgm(out / "superimposed.pgm", superimpose(stack));
        outputs.push_back("superimposed.pgm");
    }
    json params = {{"image", a.phantom_n > 0 ? "phantom:" + std::to_string(a.phantom_n)
                                             : a.image_path},
                   {"drift", a.family},        {"theta", a.theta},   {"T", a.T},
                   {"noise", a.noise},         {"sigma", a.sigma},   {"seed", a.seed},
                   {"stabilize", a.stabilize}, {"binary", a.binary}, {"out", a.out}};
    write_manifest(out, "simulate", params, outputs);
    return 0;
}

// ---------------------------------------------------------------- estimate --

struct EstimateArgs {
    std::string stack_path;
    std::string family = "linear";
    std::optional<double> xi;
    std::string weights = "uniform";
    std::string start;
    int subdomains = 1;
    std::string out;
    bool pgm = false;
};

int run_estimate(const EstimateArgs& a) {
    FrameStack stack = read_stack(a.stack_path);
    ContrastConfig cc = make_contrast_config(stack, a.weights, a.xi);
    OptimizerConfig oc;
    if (!a.start.empty()) oc.start = parse_theta(a.start);
    oc.subdomains = a.subdomains;

    EstimationResult est = estimate(stack, DriftFamily::parse(a.family), cc, oc);
    Image rec = reconstruct(stack, est.theta_hat, cc);
    Image si = superimpose(stack);

    fs::path out(a.out);
    fs::create_directories(out);
    {
        std::ofstream f(out / "estimate.txt");
        f << format_estimate_record(est, cc.xi, stack.T, stack.N);
    }
    write_grid_text(out / "reconstruction.txt", rec);
    {
        Vec2 dir = mean_drift_direction(est.theta_hat);
        std::ofstream f(out / "blur.txt");
        BlurMeasure msi = motion_blur_m2(si);
        BlurMeasure mrec = motion_blur_m2(rec);
        f << "m2_superimposed " << msi.m2 << "\n";
        f << "phi_min_superimposed " << msi.phi_min << "\n";
        f << "m2_reconstructed " << mrec.m2 << "\n";
        f << "phi_min_reconstructed " << mrec.phi_min << "\n";
        if (dir.x1 != 0.0 || dir.x2 != 0.0) {
            f << "m2tilde_superimposed " << motion_blur_known_direction(si, dir) << "\n";
            f << "m2tilde_reconstructed " << motion_blur_known_direction(rec, dir) << "\n";
        }
    }
    std::vector<std::string> outputs = {"estimate.txt", "reconstruction.txt", "blur.txt"};
    if (a.pgm) {
        export_pgm(out / "reconstruction.pgm", rec);
        export_pgm(out / "superimposed.pgm", si);
        outputs.push_back("reconstruction.pgm");
        outputs.push_back("superimposed.pgm");
    }
    json params = {{"stack", a.stack_path}, {"family", a.family},
                   {"xi", cc.xi},           {"weights", a.weights},
                   {"start", a.start},      {"subdomains", a.subdomains},
                   {"out", a.out}};
    write_manifest(out, "estimate", params, outputs);
    std::cout << format_estimate_record(est, cc.xi, stack.T, stack.N);
    return 0;
}

// ------------------------------------------------------------- reconstruct --

struct ReconstructArgs {
    std::string stack_path;
    std::string family = "linear";
    std::string theta;
    std::optional<double> xi;
    std::string weights = "uniform";
    std::string out;
    bool pgm = false;
};

int run_reconstruct(const ReconstructArgs& a) {
    FrameStack stack = read_stack(a.stack_path);
    ContrastConfig cc = make_contrast_config(stack, a.weights, a.xi);
    DriftParams theta(DriftFamily::parse(a.family), parse_theta(a.theta));
    Image rec = reconstruct(stack, theta, cc);
    fs::path out(a.out);
    fs::create_directories(out);
    write_grid_text(out / "reconstruction.txt", rec);
    std::vector<std::string> outputs = {"reconstruction.txt"};
    if (a.pgm) {
        export_pgm(out / "reconstruction.pgm", rec);
        outputs.push_back("reconstruction.pgm");
    }
    json params = {{"stack", a.stack_path}, {"family", a.family}, {"theta", a.theta},
                   {"xi", cc.xi},           {"weights", a.weights}, {"out", a.out}};
    write_manifest(out, "reconstruct", params, outputs);
    return 0;
}

// -------------------------------------------------------------------- blur --

struct BlurArgs {
    std::string image_path;
    std::string direction;
};

int run_blur(const BlurArgs& a) {
    Image img = read_grid_text(a.image_path);
    BlurMeasure m = motion_blur_m2(img);
    std::cout << "m2 " << m.m2 << "\n";
    std::cout << "phi_min " << m.phi_min << "\n";
    if (!a.direction.empty()) {
        auto d = parse_theta(a.direction);
        if (d.size() != 2) throw CLI::ValidationError("--direction", "expected dx,dy");
        std::cout << "m2tilde " << motion_blur_known_direction(img, {d[0], d[1]}) << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- bootstrap --

struct BootstrapArgs {
    std::string stack_path;
    std::string family = "linear";
    std::optional<double> xi;
    std::string weights = "uniform";
    int B = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int time_grid = 256;
    std::string out;
};

int run_bootstrap(const BootstrapArgs& a) {
    FrameStack stack = read_stack(a.stack_path);
    ContrastConfig cc = make_contrast_config(stack, a.weights, a.xi);
    EstimationResult est = estimate(stack, DriftFamily::parse(a.family), cc, OptimizerConfig{});
    SpectralImage f_hat = reconstruct_spectrum(dft2_stack(stack, cc.xi), est.theta_hat, cc);

    BootstrapConfig bc;
    bc.B = a.B;
    bc.alpha = a.alpha;
    bc.seed = a.seed;
    bc.time_grid = a.time_grid;
    BootstrapBands bands = bootstrap_bands(stack, est.theta_hat, f_hat, cc, OptimizerConfig{}, bc);

    fs::path out(a.out);
    fs::create_directories(out);
    {
        std::ofstream f(out / "bands.csv");
        f << "t,lower1,upper1,lower2,upper2\n";
        for (int i = 0; i < bc.time_grid; ++i) {
            double t = static_cast<double>(i) / (bc.time_grid - 1);
            f << t << "," << bands.lower(0, t) << "," << bands.upper(0, t) << ","
              << bands.lower(1, t) << "," << bands.upper(1, t) << "\n";
        }
    }
    {
        std::ofstream f(out / "bootstrap.txt");
        f << "sigma_hat " << bands.sigma_hat << "\n";
        f << "u_plus_1 " << bands.u_plus[0] << "\n";
        f << "u_minus_1 " << bands.u_minus[0] << "\n";
        f << "u_plus_2 " << bands.u_plus[1] << "\n";
        f << "u_minus_2 " << bands.u_minus[1] << "\n";
        f << "B_requested " << bands.B_requested << "\n";
        f << "B_effective " << bands.B_effective << "\n";
        f << "alpha " << bands.alpha << "\n";
    }
    write_grid_text(out / "bootstrap_average.txt", bootstrap_average_image(stack, bands, cc));
    {
        std::ofstream f(out / "estimate.txt");
        f << format_estimate_record(est, cc.xi, stack.T, stack.N);
    }
    json params = {{"stack", a.stack_path}, {"family", a.family}, {"xi", cc.xi},
                   {"weights", a.weights},  {"B", a.B},           {"alpha", a.alpha},
                   {"seed", a.seed},        {"out", a.out}};
    write_manifest(out, "bootstrap", params,
                   {"bands.csv", "bootstrap.txt", "bootstrap_average.txt", "estimate.txt"});
    return 0;
}

// --------------------------------------------------------------------- bin --

struct BinArgs {
    std::string table_path;
    int T = 0;
    int N = 0;
    std::string out;
    bool binary = false;
};

int run_bin(const BinArgs& a) {
    LocalizationTable table = read_localization_table(a.table_path);
    BinResult r = bin_localizations(table, a.T, a.N);
    if (r.rejected > 0)
        std::cerr << "warning: rejected " << r.rejected
                  << " records with coordinates outside [0,1)\n";
    fs::path out(a.out);
    fs::create_directories(out);
    std::vector<std::string> outputs;
    if (a.binary) {
        write_stack_binary(out / "stack.drft", r.stack);
        outputs.push_back("stack.drft");
    } else {
        write_stack_dir(out, r.stack);
        outputs.push_back("frame_*.txt");
        outputs.push_back("counts.txt");
    }
    json params = {{"table", a.table_path}, {"T", a.T}, {"N", a.N},
                   {"binary", a.binary},    {"out", a.out}};
    write_manifest(out, "bin", params, outputs);
    return 0;
}

// ------------------------------------------------------------------- track --

struct TrackArgs {
    std::string stack_path;
    std::string region;
    std::string out;
};

int run_track(const TrackArgs& a) {
    FrameStack stack = read_stack(a.stack_path);
    auto r = parse_theta(a.region);
    if (r.size() != 4) throw CLI::ValidationError("--region", "expected i1lo,i1hi,i2lo,i2hi");
    PixelRect rect{static_cast<int>(r[0]), static_cast<int>(r[1]), static_cast<int>(r[2]),
                   static_cast<int>(r[3])};
    auto track = track_fiducial(stack, rect);
    fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream f(out);
    f << "t,x1,x2\n";
    for (int t = 0; t < stack.T; ++t) {
        f << static_cast<double>(t) / stack.T << ",";
        if (track[static_cast<std::size_t>(t)])
            f << track[static_cast<std::size_t>(t)]->x1 << ","
              << track[static_cast<std::size_t>(t)]->x2 << "\n";
        else
            f << "nan,nan\n";
    }
    return 0;
}

// --------------------------------------------------------------- reproduce --

struct ReproduceArgs {
    std::string table = "rmse";
    int reps = 100;
    std::string T_list = "20,50,100";
    std::string families = "linear,quadratic,cubic,jump";
    std::string noises = "gauss,t2,poisson";
    int N = 256;
    std::uint64_t seed = 1;
    std::string out;
};

DriftParams table_truth(const DriftFamily& family) {
    if (family == DriftFamily::linear())
        return {family, {50.0 / 256, 30.0 / 256}};
    if (family == DriftFamily::quadratic())
        return {family, {50.0 / 256, 10.0 / 256, 0.0, 20.0 / 256}};
    if (family == DriftFamily::cubic())
        return {family, {50.0 / 256, 0.0, 10.0 / 256, 0.0, 10.0 / 256, 50.0 / 256}};
    if (family.kind == FamilyKind::linear_with_jump)
        return {family,
                {80.0 / 256, 80.0 / 256, 40.0 / 256, 80.0 / 256, 40.0 / 256, 60.0 / 256, 0.5}};
    throw std::invalid_argument("no reference parameters for family " + family.str());
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        out.push_back(
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int run_reproduce(const ReproduceArgs& a) {
    auto families = split_list(a.families);
    auto noises = split_list(a.noises);
    std::vector<int> Ts;
    for (const auto& s : split_list(a.T_list)) Ts.push_back(std::stoi(s));

    Image phantom = filament_phantom(a.N);
    fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream f(out);

    struct Cell {
        std::vector<double> mean;
        double rmse = 0.0;
        double blur_si = 0.0;
        double blur_rec = 0.0;
    };

    auto run_cell = [&](const DriftFamily& family, const std::string& noise, int T) {
        DriftParams truth = table_truth(family);
        ContrastConfig cc =
            ContrastConfig::uniform(std::ceil(std::sqrt(static_cast<double>(T))));
        Cell cell;
        cell.mean.assign(static_cast<std::size_t>(family.dim()), 0.0);
        double sq = 0.0;
        for (int r = 0; r < a.reps; ++r) {
            SimulationSpec spec;
            spec.image = phantom;
            spec.drift = truth;
            spec.T = T;
            spec.noise = parse_noise(noise, 0.1);
            spec.seed = a.seed + 7919ULL * static_cast<std::uint64_t>(r);
            FrameStack stack = simulate_stack(spec);
            FrameStack work = noise == "poisson" ? variance_stabilize(stack) : stack;
            EstimationResult est = estimate(work, family, cc, OptimizerConfig{});
            double d2 = 0.0;
            for (int j = 0; j < family.dim(); ++j) {
                double e = est.theta_hat.theta[static_cast<std::size_t>(j)] -
                           truth.theta[static_cast<std::size_t>(j)];
                cell.mean[static_cast<std::size_t>(j)] +=
                    est.theta_hat.theta[static_cast<std::size_t>(j)] / a.reps;
                d2 += e * e;
            }
            sq += d2 / a.reps;
            if (r == 0) {
                Vec2 dir = mean_drift_direction(truth);
                cell.blur_si = motion_blur_known_direction(superimpose(stack), dir);
                cell.blur_rec =
                    motion_blur_known_direction(reconstruct(work, est.theta_hat, cc), dir);
            }
        }
        cell.rmse = 1000.0 * std::sqrt(sq);
        return cell;
    };

    if (a.table == "rmse") {
        f << "family";
        for (const auto& noise : noises)
            for (int T : Ts) f << "," << noise << "_T" << T;
        f << "\n";
        for (const auto& fam : families) {
            f << fam;
            for (const auto& noise : noises)
                for (int T : Ts) f << "," << run_cell(DriftFamily::parse(fam), noise, T).rmse;
            f << "\n";
        }
    } else if (a.table == "mean") {
        f << "noise,T";
        for (const auto& fam : families) f << "," << fam;
        f << "\n";
        for (const auto& noise : noises)
            for (int T : Ts) {
                f << noise << "," << T;
                for (const auto& fam : families) {
                    Cell cell = run_cell(DriftFamily::parse(fam), noise, T);
                    f << ",\"(" << format_theta(cell.mean) << ")\"";
                }
                f << "\n";
            }
    } else if (a.table == "blur") {
        f << "image,family";
        for (const auto& noise : noises)
            for (int T : Ts) f << "," << noise << "_T" << T;
        f << "\n";
        for (const auto& fam : families) {
            std::vector<Cell> cells;
            for (const auto& noise : noises)
                for (int T : Ts) cells.push_back(run_cell(DriftFamily::parse(fam), noise, T));
            f << "superimposed," << fam;
            for (const auto& c : cells) f << "," << c.blur_si;
            f << "\nreconstructed," << fam;
            for (const auto& c : cells) f << "," << c.blur_rec;
            f << "\n";
        }
    } else {
        throw CLI::ValidationError("--table", "expected mean|rmse|blur");
    }

    fs::path manifest_dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    json params = {{"table", a.table},       {"reps", a.reps},    {"T", a.T_list},
                   {"families", a.families}, {"noise", a.noises}, {"N", a.N},
                   {"seed", a.seed},         {"out", a.out}};
    write_manifest(manifest_dir, "reproduce", params, {out.filename().string()});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drift estimation and correction for sparse image sequences"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "Worker thread count (default: all cores)");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Generate a synthetic drifted frame stack");
    auto* sim_image = c_sim->add_option("--image", sim.image_path, "Ground-truth grid file");
    c_sim->add_option("--phantom", sim.phantom_n, "Use the built-in test image at this size")
        ->excludes(sim_image);
    c_sim->add_option("--drift", sim.family, "Drift family");
    c_sim->add_option("--theta", sim.theta, "Drift parameters (csv)")->required();
    c_sim->add_option("--T", sim.T, "Frame count")->required();
    c_sim->add_option("--noise", sim.noise, "gauss|t2|poisson");
    auto* sim_sigma = c_sim->add_option("--sigma", sim.sigma, "Noise scale");
    auto* sim_seed = c_sim->add_option("--seed", sim.seed, "RNG seed (default: DRIFT_SEED)");
    c_sim->add_option("--out", sim.out, "Output directory")->required();
    c_sim->add_flag("--stabilize", sim.stabilize, "Apply sqrt(z + 1/4)");
    c_sim->add_flag("--binary", sim.binary, "Write one binary stack file");
    c_sim->add_flag("--export-pgm", sim.pgm, "Export an 8-bit preview image");

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "Fit a drift model to a frame stack");
    c_est->add_option("--stack", est.stack_path, "Stack directory or binary file")->required();
    c_est->add_option("--family", est.family, "Drift family");
    c_est->add_option("--xi", est.xi, "Spectral cutoff (default sqrt(T), or 0.2 N with counts)");
    c_est->add_option("--weights", est.weights, "uniform|counts");
    c_est->add_option("--start", est.start, "Optimizer start vector (csv)");
    c_est->add_option("--subdomains", est.subdomains, "Split into SxS domains and average");
    c_est->add_option("--out", est.out, "Output directory")->required();
    c_est->add_flag("--export-pgm", est.pgm, "Export 8-bit preview images");

    ReconstructArgs rec;
    auto* c_rec = app.add_subcommand("reconstruct", "Reconstruct with given drift parameters");
    c_rec->add_option("--stack", rec.stack_path, "Stack directory or binary file")->required();
    c_rec->add_option("--family", rec.family, "Drift family");
    c_rec->add_option("--theta", rec.theta, "Drift parameters (csv)")->required();
    c_rec->add_option("--xi", rec.xi, "Spectral cutoff");
    c_rec->add_option("--weights", rec.weights, "uniform|counts");
    c_rec->add_option("--out", rec.out, "Output directory")->required();
    c_rec->add_flag("--export-pgm", rec.pgm, "Export an 8-bit preview image");

    BlurArgs blur;
    auto* c_blur = app.add_subcommand("blur", "Motion-blur measures of an image");
    c_blur->add_option("--image", blur.image_path, "Grid file")->required();
    c_blur->add_option("--direction", blur.direction, "Known drift direction dx,dy");

    BootstrapArgs boot;
    auto* c_boot = app.add_subcommand("bootstrap", "Residual bootstrap confidence bands");
    c_boot->add_option("--stack", boot.stack_path, "Stack directory or binary file")->required();
    c_boot->add_option("--family", boot.family, "Drift family");
    c_boot->add_option("--xi", boot.xi, "Spectral cutoff");
    c_boot->add_option("--weights", boot.weights, "uniform|counts");
    c_boot->add_option("--B", boot.B, "Replicate count");
    c_boot->add_option("--alpha", boot.alpha, "Band level");
    auto* boot_seed = c_boot->add_option("--seed", boot.seed, "RNG seed (default: DRIFT_SEED)");
    c_boot->add_option("--out", boot.out, "Output directory")->required();

    BinArgs bin;
    auto* c_bin = app.add_subcommand("bin", "Bin a localization table into position histograms");
    c_bin->add_option("--table", bin.table_path, "Localization csv (x1,x2,frame)")->required();
    c_bin->add_option("--T", bin.T, "Histogram count")->required();
    c_bin->add_option("--N", bin.N, "Grid side length")->required();
    c_bin->add_option("--out", bin.out, "Output directory")->required();
    c_bin->add_flag("--binary", bin.binary, "Write one binary stack file");

    TrackArgs track;
    auto* c_track = app.add_subcommand("track", "Track a fiducial marker centroid");
    c_track->add_option("--stack", track.stack_path, "Stack directory or binary file")->required();
    c_track->add_option("--region", track.region, "Pixel rectangle i1lo,i1hi,i2lo,i2hi")
        ->required();
    c_track->add_option("--out", track.out, "Output csv path")->required();

    ReproduceArgs rep;
    auto* c_rep = app.add_subcommand("reproduce", "Re-run the simulation study tables");
    c_rep->add_option("--table", rep.table, "mean|rmse|blur");
    c_rep->add_option("--reps", rep.reps, "Replicates per cell");
    c_rep->add_option("--T", rep.T_list, "Frame counts (csv)");
    c_rep->add_option("--families", rep.families, "Drift families (csv)");
    c_rep->add_option("--noise", rep.noises, "Noise models (csv)");
    c_rep->add_option("--N", rep.N, "Grid size");
    auto* rep_seed = c_rep->add_option("--seed", rep.seed, "RNG seed (default: DRIFT_SEED)");
    c_rep->add_option("--out", rep.out, "Output csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    set_jobs(jobs);
    try {
        if (*c_sim) {
            if (sim.noise == "poisson" && sim_sigma->count() > 0)
                std::cerr << "warning: --noise poisson ignores --sigma\n";
            sim.seed = resolve_seed(sim_seed, sim.seed);
            return run_simulate(sim);
        }
        if (*c_est) return run_estimate(est);
        if (*c_rec) return run_reconstruct(rec);
        if (*c_blur) return run_blur(blur);
        if (*c_boot) {
            boot.seed = resolve_seed(boot_seed, boot.seed);
            return run_bootstrap(boot);
        }
        if (*c_bin) return run_bin(bin);
        if (*c_track) return run_track(track);
        if (*c_rep) {
            rep.seed = resolve_seed(rep_seed, rep.seed);
            return run_reproduce(rep);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
