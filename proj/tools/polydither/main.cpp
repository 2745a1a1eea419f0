// polydither: polyomino blue-noise halftoning front end.
//
// Subcommands: build-tables, dither, ramp, spectrum, compare.
// Exit codes: 0 success, 1 runtime failure, 2 usage or asset error.

#include "polydither/halftone.hpp"
#include "polydither/image_io.hpp"
#include "polydither/optimizer.hpp"
#include "polydither/rng.hpp"
#include "polydither/shape_asset.hpp"
#include "polydither/spectrum.hpp"
#include "polydither/vnc.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pd = polydither;
namespace fs = std::filesystem;

namespace {

// Errors caused by bad flags or unusable assets; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parseFraction(const std::string& text, const char* what) {
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            double num = std::stod(text.substr(0, slash));
            double den = std::stod(text.substr(slash + 1));
            if (den == 0)
                throw UsageError(std::string(what) + ": zero denominator");
            return num / den;
        }
        return std::stod(text);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": cannot parse '" + text + "'");
    }
}

std::pair<long long, long long> parseOffset(const std::string& text) {
    long long x = 0, y = 0;
    char comma = 0;
    std::istringstream is(text);
    if (!(is >> x >> comma >> y) || comma != ',')
        throw UsageError("--offset expects 'x,y'");
    return {x, y};
}

struct TableSet {
    pd::CellSet shape;
    pd::ProductionRule rule;
    pd::StructureRegistry registry;
    pd::GeometryTable geometry;
    pd::RankTable table;
};

constexpr const char* kRuleFile = "ghexomino.rule";
constexpr const char* kRegistryFile = "structure.reg";
constexpr const char* kRankFile = "rank.tbl";

TableSet loadTableSet(const std::string& dir) {
    fs::path base(dir);
    for (const char* name : {kRuleFile, kRegistryFile, kRankFile})
        if (!fs::exists(base / name))
            throw UsageError("table asset missing: " + (base / name).string());
    TableSet ts;
    ts.shape = pd::canonicalGHexomino();
    ts.rule = pd::loadRule((base / kRuleFile).string());
    if (!pd::verifyProductionRule(ts.shape, ts.rule))
        throw UsageError("production rule asset does not tile the scaled shape");
    ts.registry = pd::loadRegistry((base / kRegistryFile).string(), ts.shape, ts.rule);
    // Geometry depends on S, which lives in the rank file header; peek it first.
    int s = 0;
    {
        std::ifstream f(base / kRankFile);
        std::string word;
        while (f >> word)
            if (word.rfind("S=", 0) == 0) {
                s = std::stoi(word.substr(2));
                break;
            }
    }
    if (s < 2)
        throw UsageError("rank table header lacks S=");
    ts.geometry = pd::buildGeometryTable(ts.registry, s);
    ts.table = pd::loadRankTable((base / kRankFile).string(), ts.registry, ts.geometry);
    return ts;
}

std::string provenanceText(const pd::RankTable& table) {
    std::ostringstream os;
    os << "polydither table S=" << table.S << " seed=" << table.seed
       << " rulehash=" << table.ruleHash;
    return os.str();
}

// Dithered constant patches at seeded random plane offsets.
std::vector<pd::BinaryImage> ditheredPatches(const TableSet& ts, double gray, int size,
                                             int count, std::uint64_t seed) {
    pd::Rng rng(pd::subSeed(seed, "patch-offsets"));
    std::vector<pd::BinaryImage> patches;
    patches.reserve(count);
    for (int i = 0; i < count; ++i) {
        long long ox = static_cast<long long>(rng.below(1 << 20));
        long long oy = static_cast<long long>(rng.below(1 << 20));
        pd::ThresholdView view =
            pd::buildThresholdView(size, size, ts.registry, ts.geometry, ts.table, ox, oy);
        patches.push_back(pd::ditherConstant(gray, view));
    }
    return patches;
}

void writeSpectrumTable(const pd::SpectrumEstimate& spec, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << "# freq mean_power anisotropy count\n";
    f.precision(9);
    for (int b = 0; b < spec.bins(); ++b)
        f << spec.radialFrequency[b] << ' ' << spec.radialPower[b] << ' '
          << spec.anisotropy[b] << ' ' << spec.radialCount[b] << '\n';
}

void writeSpectrumImage(const pd::SpectrumEstimate& spec, const std::string& path) {
    std::vector<std::uint16_t> img(spec.averagedPower.size());
    double maxLog = 0;
    for (double p : spec.averagedPower)
        maxLog = std::max(maxLog, std::log1p(p));
    for (std::size_t i = 0; i < img.size(); ++i) {
        double v = maxLog > 0 ? std::log1p(spec.averagedPower[i]) / maxLog : 0.0;
        img[i] = static_cast<std::uint16_t>(v * 65535.0 + 0.5);
    }
    pd::writeGray16PNG(img, spec.size, spec.size, path);
}

int cmdBuildTables(int s, const std::string& d0Text, std::uint64_t seed, double sigma,
                   int areaCells, int sweeps, int relaxWindow, int lloydIters,
                   const std::string& shapePath, const std::string& outDir) {
    pd::OptimizerConfig config;
    config.S = s;
    config.seed = seed;
    config.sigma = sigma;
    if (areaCells > 0)
        config.areaCells = areaCells;
    if (sweeps > 0)
        config.borderSweeps = sweeps;
    if (relaxWindow > 0)
        config.relaxWindowPx = relaxWindow;
    if (lloydIters > 0)
        config.lloydIterations = lloydIters;
    config.progress = [](const std::string& msg) { std::cerr << msg << "\n"; };
    if (!d0Text.empty())
        config.d0 = parseFraction(d0Text, "--d0");
    if (config.density() <= 0 || config.density() > 0.5)
        throw UsageError("--d0 must lie in (0, 1/2]");
    if (s < 4 || s > 64)
        throw UsageError("--s must lie in [4, 64]");

    pd::CellSet shape;
    if (shapePath.empty()) {
        shape = pd::canonicalGHexomino();
    } else {
        if (!fs::exists(shapePath))
            throw UsageError("shape asset not found: " + shapePath);
        shape = pd::verifyHexominoAsset(pd::loadShapeAsset(shapePath));
    }

    auto t0 = std::chrono::steady_clock::now();
    pd::ProductionRule rule = pd::gHexominoRule();
    pd::StructureRegistry registry = pd::buildRegistry(shape, rule);
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "registry: " << registry.classCount() << " classes, "
              << registry.segmentLabels.size() << " segment labels ("
              << std::chrono::duration<double>(t1 - t0).count() << " s)\n";

    pd::GeometryTable geometry = pd::buildGeometryTable(registry, config.S);
    pd::RankTable table = pd::buildRankTable(registry, geometry, config);
    auto t2 = std::chrono::steady_clock::now();
    std::cout << "rank table: S=" << table.S << " levels=" << table.levels() << " ("
              << std::chrono::duration<double>(t2 - t1).count() << " s)\n";

    fs::create_directories(outDir);
    fs::path base(outDir);
    pd::saveRule(rule, (base / kRuleFile).string());
    pd::saveRegistry(registry, (base / kRegistryFile).string());
    pd::saveRankTable(table, registry, (base / kRankFile).string());
    std::cout << "wrote " << (base / kRankFile).string() << "\n";
    return 0;
}

int cmdDither(const std::string& tableDir, const std::string& inPath,
              const std::string& outPath, const std::string& offsetText) {
    TableSet ts = loadTableSet(tableDir);
    if (!fs::exists(inPath))
        throw UsageError("input image not found: " + inPath);
    pd::GrayImage input = pd::readGrayImage(inPath);
    auto [ox, oy] = parseOffset(offsetText);
    pd::ThresholdView view = pd::buildThresholdView(input.width, input.height, ts.registry,
                                                    ts.geometry, ts.table, ox, oy);
    pd::writeBinaryImage(pd::dither(input, view), outPath, provenanceText(ts.table));
    return 0;
}

int cmdRamp(const std::string& tableDir, int width, int height,
            const std::string& offsetText, const std::string& outPath) {
    if (width < 2 || height < 1)
        throw UsageError("ramp needs --width >= 2 and --height >= 1");
    TableSet ts = loadTableSet(tableDir);
    auto [ox, oy] = parseOffset(offsetText);
    pd::ThresholdView view =
        pd::buildThresholdView(width, height, ts.registry, ts.geometry, ts.table, ox, oy);
    pd::writeBinaryImage(pd::ditherRamp(view), outPath, provenanceText(ts.table));
    return 0;
}

int cmdSpectrum(const std::string& tableDir, const std::string& levelText, int size,
                int patches, std::uint64_t seed, double blurSigma,
                const std::string& outPrefix) {
    double g = parseFraction(levelText, "--level");
    if (g <= 0 || g >= 1)
        throw UsageError("--level must lie strictly inside (0, 1)");
    if (size < 16 || patches < 1)
        throw UsageError("--size must be >= 16 and --patches >= 1");
    TableSet ts = loadTableSet(tableDir);
    pd::SpectrumEstimate spec =
        pd::estimateSpectrum(ditheredPatches(ts, g, size, patches, seed), blurSigma);
    writeSpectrumTable(spec, outPrefix + ".txt");
    writeSpectrumImage(spec, outPrefix + ".png");
    std::cout << "low-frequency energy ratio: " << pd::lowFrequencyEnergyRatio(spec, g)
              << "\n";
    return 0;
}

struct MethodStats {
    double ratio = 0;
    double maxPeak = 0;
    double maxPeakFreq = 0;
};

MethodStats statsFor(const std::vector<pd::BinaryImage>& patches, double g) {
    pd::SpectrumEstimate spec = pd::estimateSpectrum(patches);
    MethodStats st;
    st.ratio = pd::lowFrequencyEnergyRatio(spec, g);
    std::vector<double> peaks = pd::radialPeakScores(spec);
    for (int b = 0; b < spec.bins(); ++b)
        if (spec.radialFrequency[b] <= 0.5 && peaks[b] > st.maxPeak) {
            st.maxPeak = peaks[b];
            st.maxPeakFreq = spec.radialFrequency[b];
        }
    return st;
}

int cmdCompare(const std::string& tableDir, const std::string& levelText, int size,
               int patches, int vncEdge, double sigma, std::uint64_t seed,
               const std::string& outPath) {
    double g = parseFraction(levelText, "--level");
    if (g <= 0 || g >= 1)
        throw UsageError("--level must lie strictly inside (0, 1)");
    TableSet ts = loadTableSet(tableDir);

    MethodStats ours = statsFor(ditheredPatches(ts, g, size, patches, seed), g);

    pd::VncMatrix matrix = pd::voidAndClusterMatrix(vncEdge, 0.1, sigma, seed);
    std::vector<pd::BinaryImage> vncPatches;
    for (int i = 0; i < patches; ++i)
        vncPatches.push_back(pd::vncDitherConstant(matrix, g, size, size));
    MethodStats vnc = statsFor(vncPatches, g);

    pd::Rng rng(pd::subSeed(seed, "white-noise"));
    std::vector<pd::BinaryImage> noise;
    for (int i = 0; i < patches; ++i) {
        pd::BinaryImage p(size, size);
        for (auto& px : p.pixels)
            px = rng.unit() < g ? 1 : 0;
        noise.push_back(std::move(p));
    }
    MethodStats white = statsFor(noise, g);

    std::ostringstream report;
    report.precision(6);
    report << "level g = " << g << ", " << patches << " patches of " << size << "x" << size
           << "\n";
    report << "method          lowFreqRatio  maxPeak  atFreq\n";
    auto line = [&](const char* name, const MethodStats& st) {
        report << name << st.ratio << "      " << st.maxPeak << "   " << st.maxPeakFreq
               << "\n";
    };
    line("polyomino       ", ours);
    line("void-and-cluster", vnc);
    line("white-noise     ", white);
    std::cout << report.str();
    if (!outPath.empty()) {
        std::ofstream f(outPath);
        if (!f)
            throw std::runtime_error("cannot write " + outPath);
        f << report.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polyomino-based blue-noise halftoning"};
    app.require_subcommand(1);

    // build-tables
    auto* build = app.add_subcommand("build-tables", "Optimize and write threshold tables");
    int s = 8;
    std::string d0Text, shapePath, outDir = "tables";
    std::uint64_t seed = 0;
    double sigma = 1.5;
    build->add_option("--s", s, "Cell edge length in pixels")->capture_default_str();
    build->add_option("--d0", d0Text, "Initial dot density (fraction, default 1/S)");
    build->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
    build->add_option("--sigma", sigma, "Gaussian sigma in px")->capture_default_str();
    build->add_option("--shape", shapePath, "Optional shape asset override");
    build->add_option("--out", outDir, "Output directory")->capture_default_str();
    int areaCells = 0, sweeps = 0, relaxWindow = 0, lloydIters = 0;
    build->add_option("--area", areaCells, "Border-init working area edge, cells");
    build->add_option("--sweeps", sweeps, "Border refinement sweeps");
    build->add_option("--relax-window", relaxWindow, "Lloyd window edge, px");
    build->add_option("--lloyd-iters", lloydIters, "Lloyd iteration cap");

    // dither
    auto* dither = app.add_subcommand("dither", "Halftone a grayscale image");
    std::string tableDir = "tables", inPath, outPath = "out.png", offsetText = "0,0";
    dither->add_option("--table", tableDir, "Table directory")->capture_default_str();
    dither->add_option("--in", inPath, "Input image (.png/.pgm)")->required();
    dither->add_option("--offset", offsetText, "Plane offset x,y")->capture_default_str();
    dither->add_option("--out", outPath, "Output image (.png/.pbm/.pgm)")
        ->capture_default_str();

    // ramp
    auto* ramp = app.add_subcommand("ramp", "Emit a 0-to-1 dither ramp strip");
    std::string rampTable = "tables", rampOffset = "0,0", rampOut = "ramp.png";
    int rampW = 1024, rampH = 96;
    ramp->add_option("--table", rampTable, "Table directory")->capture_default_str();
    ramp->add_option("--width", rampW, "Strip width in px")->capture_default_str();
    ramp->add_option("--height", rampH, "Strip height in px")->capture_default_str();
    ramp->add_option("--offset", rampOffset, "Plane offset x,y")->capture_default_str();
    ramp->add_option("--out", rampOut, "Output image")->capture_default_str();

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Estimate the power spectrum");
    std::string specTable = "tables", levelText = "6/256", specOut = "spectrum";
    int specSize = 256, specPatches = 10;
    std::uint64_t specSeed = 0;
    double blurSigma = 1.0;
    spectrum->add_option("--table", specTable, "Table directory")->capture_default_str();
    spectrum->add_option("--level", levelText, "Constant gray level g")
        ->capture_default_str();
    spectrum->add_option("--size", specSize, "Patch edge in px")->capture_default_str();
    spectrum->add_option("--patches", specPatches, "Patch count")->capture_default_str();
    spectrum->add_option("--seed", specSeed, "Patch offset seed")->capture_default_str();
    spectrum->add_option("--blur", blurSigma, "Display blur sigma (2-D image only)")
        ->capture_default_str();
    spectrum->add_option("--out", specOut, "Output prefix (.txt and .png)")
        ->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare",
                                       "Compare against the void-and-cluster baseline");
    std::string cmpTable = "tables", cmpLevel = "6/256", cmpOut;
    int cmpSize = 256, cmpPatches = 10, vncEdge = 62;
    std::uint64_t cmpSeed = 0;
    double cmpSigma = 1.5;
    compare->add_option("--table", cmpTable, "Table directory")->capture_default_str();
    compare->add_option("--level", cmpLevel, "Constant gray level g")
        ->capture_default_str();
    compare->add_option("--size", cmpSize, "Patch edge in px")->capture_default_str();
    compare->add_option("--patches", cmpPatches, "Patch count")->capture_default_str();
    compare->add_option("--vnc-n", vncEdge, "Baseline matrix edge")->capture_default_str();
    compare->add_option("--sigma", cmpSigma, "Baseline Gaussian sigma")
        ->capture_default_str();
    compare->add_option("--seed", cmpSeed, "RNG seed")->capture_default_str();
    compare->add_option("--out", cmpOut, "Optional report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (build->parsed())
            return cmdBuildTables(s, d0Text, seed, sigma, areaCells, sweeps, relaxWindow,
                                  lloydIters, shapePath, outDir);
        if (dither->parsed())
            return cmdDither(tableDir, inPath, outPath, offsetText);
        if (ramp->parsed())
            return cmdRamp(rampTable, rampW, rampH, rampOffset, rampOut);
        if (spectrum->parsed())
            return cmdSpectrum(specTable, levelText, specSize, specPatches, specSeed,
                               blurSigma, specOut);
        if (compare->parsed())
            return cmdCompare(cmpTable, cmpLevel, cmpSize, cmpPatches, vncEdge, cmpSigma,
                              cmpSeed, cmpOut);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pd::AssetInvalid& e) {
        std::cerr << "asset error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
