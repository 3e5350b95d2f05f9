// delpezzo_main.cpp
//
// Command-line surface over the lattice toolkit.  Subcommands:
//
//   enumerate    class catalogs as JSON lines (with optional disk cache)
//   orbit        Weyl orbits of a class, a conic pair, or a stabilizer
//   nef          nef/ample membership with a negative witness on failure
//   decompose    constructive nef decomposition with verification block
//   graph-chi    sheaf bookkeeping for a dual graph read from JSON
//
// Exit codes: 0 success, 2 usage or bad input, 3 incomplete orbit (cap
// hit), 4 negative-pairing witness, 5 internal assertion failure.
// Catalog caching is enabled when DELPEZZO_CACHE_DIR is set.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "delpezzo/enumerate.hpp"
#include "delpezzo/json_io.hpp"
#include "delpezzo/lattice.hpp"
#include "delpezzo/nef.hpp"
#include "delpezzo/trees.hpp"
#include "delpezzo/weyl.hpp"

namespace {

using namespace delpezzo;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_incomplete = 3;
constexpr int exit_witness = 4;
constexpr int exit_internal = 5;

DivisorClass parse_class(const LatticeContext& ctx, const std::string& spec) {
    // Either a comma-separated coefficient list or a basis token such as
    // "e3", "l" or "-K".
    if (spec == "l") return line_class(ctx);
    if (spec == "-K" || spec == "-k") return anticanonical_class(ctx);
    if (spec == "K" || spec == "k") return canonical_class(ctx);
    if (spec.size() >= 2 && spec[0] == 'e') {
        int idx = std::stoi(spec.substr(1));
        return exceptional_basis_class(ctx, idx);
    }
    std::vector<Coeff> v;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long val = std::stoll(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad coefficient: " + item);
        v.push_back(val);
    }
    DivisorClass c(std::move(v));
    require_in_context(ctx, c);
    return c;
}

std::optional<std::string> cache_dir() {
    const char* dir = std::getenv("DELPEZZO_CACHE_DIR");
    if (!dir || !*dir) return std::nullopt;
    return std::string(dir);
}

std::string cache_path(const std::string& dir, int delta, Coeff d, Coeff s) {
    std::ostringstream name;
    name << dir << "/catalog_delta" << delta << "_deg" << d << "_sq" << s << ".json";
    return name.str();
}

ClassCatalog catalog_with_cache(const LatticeContext& ctx, Coeff d, Coeff s) {
    auto dir = cache_dir();
    if (dir) {
        std::error_code ec;
        std::filesystem::create_directories(*dir, ec);
        const std::string path = cache_path(*dir, ctx.delta(), d, s);
        if (auto j = read_json_file(path)) {
            if (auto cat = catalog_from_json(*j)) {
                if (cat->query.ctx == ctx && cat->query.degree == d &&
                    cat->query.self_intersection == s)
                    return *cat;
            }
        }
        ClassCatalog cat = enumerate_classes({ctx, d, s});
        write_json_file(path, catalog_to_json(cat));
        return cat;
    }
    return enumerate_classes({ctx, d, s});
}

int cmd_enumerate(int delta, bool conics, bool exceptional, std::optional<Coeff> deg,
                  std::optional<Coeff> sq, const std::string& out_path) {
    LatticeContext ctx = LatticeContext::blowup_plane(delta);
    Coeff d, s;
    if (conics) { d = 2; s = 0; }
    else if (exceptional) { d = 1; s = -1; }
    else if (deg && sq) { d = *deg; s = *sq; }
    else {
        std::cerr << "enumerate: need --conics, --exceptional, or both --deg and --sq\n";
        return exit_usage;
    }
    ClassCatalog cat = catalog_with_cache(ctx, d, s);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "enumerate: cannot open " << out_path << "\n";
            return exit_usage;
        }
        out = &file;
    }
    for (const auto& c : cat.classes) {
        json line;
        line["class"] = class_to_json(c);
        line["sq"] = self_intersection(ctx, c);
        line["kdeg"] = anticanonical_degree(ctx, c);
        *out << line.dump() << "\n";
    }
    json summary;
    summary["count"] = cat.size();
    *out << summary.dump() << "\n";
    return exit_ok;
}

int cmd_orbit(int delta, const std::string& class_spec, const std::string& pair_spec,
              const std::string& fix_spec, const std::string& targets_name, std::size_t cap) {
    LatticeContext ctx = LatticeContext::blowup_plane(delta);
    json report;

    if (!fix_spec.empty()) {
        DivisorClass fixed = parse_class(ctx, fix_spec);
        const ClassCatalog& targets =
            (targets_name == "conics") ? conic_classes(ctx) : exceptional_classes(ctx);
        WeylGenerators gen(ctx);
        StabilizerPartition part = stabilizer_orbits(gen, fixed, targets, cap);
        report["fixed"] = class_to_json(fixed);
        report["targets"] = targets_name;
        report["cells"] = json::array();
        for (const auto& cell : part.cells) {
            json cj;
            cj["pairing"] = cell.pairing;
            cj["size"] = cell.members.size();
            cj["representative"] = class_to_json(cell.representative);
            report["cells"].push_back(std::move(cj));
        }
        report["cell_count"] = part.cells.size();
        report["complete"] = part.complete;
        std::cout << report.dump(2) << "\n";
        return part.complete ? exit_ok : exit_incomplete;
    }

    if (class_spec.empty()) {
        std::cerr << "orbit: need --class\n";
        return exit_usage;
    }
    DivisorClass x = parse_class(ctx, class_spec);

    if (!pair_spec.empty()) {
        DivisorClass q2 = parse_class(ctx, pair_spec);
        if (!is_conic_class(ctx, x) || !is_conic_class(ctx, q2))
            throw std::invalid_argument("orbit --pair: both classes must be conics");
        ConicPairOrbits orbits = conic_pair_orbits(ctx);
        // Normalize (x, q2) onto first slot A_1 and locate its cell.
        WeylGenerators gen(ctx);
        auto w = word_mapping(gen, x, orbits.first);
        if (!w) throw std::logic_error("orbit --pair: conic not in the A_1 orbit");
        DivisorClass q2n = gen.apply_word(*w, q2);
        const Coeff product = intersect(ctx, x, q2);
        std::optional<bool> ample;
        if (delta == 8 && product == 4)
            ample = is_ample(ctx, x + q2);
        for (const auto& cell : orbits.cells) {
            if (cell.product != product) continue;
            if (cell.ample.has_value() && ample.has_value() && *cell.ample != *ample) continue;
            json cj;
            cj["product"] = cell.product;
            if (cell.ample.has_value()) cj["ample"] = *cell.ample;
            cj["stabilizer_cell_size"] = cell.stabilizer_cell_size;
            cj["pair_count"] = cell.pair_count;
            cj["second_representative"] = class_to_json(cell.second_representative);
            report["pair_cell"] = std::move(cj);
            break;
        }
        report["first"] = class_to_json(x);
        report["second"] = class_to_json(q2);
        report["second_normalized"] = class_to_json(q2n);
        std::cout << report.dump(2) << "\n";
        return exit_ok;
    }

    WeylGenerators gen(ctx);
    OrbitCell cell = orbit_of(gen, x, cap);
    report["class"] = class_to_json(x);
    report["size"] = cell.size;
    report["complete"] = cell.complete;
    report["representative"] = class_to_json(cell.representative);
    std::cout << report.dump(2) << "\n";
    return cell.complete ? exit_ok : exit_incomplete;
}

int cmd_nef(int delta, bool quadric, const std::string& class_spec) {
    LatticeContext ctx = quadric ? LatticeContext::quadric() : LatticeContext::blowup_plane(delta);
    DivisorClass d = parse_class(ctx, class_spec);
    json report;
    report["class"] = class_to_json(d);
    if (auto w = nef_witness(ctx, d)) {
        report["nef"] = false;
        report["witness"] = class_to_json(*w);
        report["pairing"] = intersect(ctx, d, *w);
        std::cout << report.dump(2) << "\n";
        return exit_witness;
    }
    report["nef"] = true;
    report["ample"] = is_ample(ctx, d);
    std::cout << report.dump(2) << "\n";
    return exit_ok;
}

int cmd_decompose(int delta, const std::string& class_spec) {
    LatticeContext ctx = LatticeContext::blowup_plane(delta);
    DivisorClass d = parse_class(ctx, class_spec);
    json report;
    report["class"] = class_to_json(d);
    if (auto w = nef_witness(ctx, d)) {
        report["nef"] = false;
        report["witness"] = class_to_json(*w);
        report["pairing"] = intersect(ctx, d, *w);
        std::cout << report.dump(2) << "\n";
        return exit_witness;
    }
    NefDecomposition dec = nef_decompose(ctx, d);
    report["n"] = dec.coefficients;
    report["contractions"] = json::array();
    for (const auto& step : dec.steps)
        report["contractions"].push_back(class_to_json(step.contracted));
    json res;
    res["lattice"] = dec.residual_ctx.is_quadric() ? json("quadric") : json(dec.residual_ctx.delta());
    res["class"] = class_to_json(dec.residual);
    report["residual"] = std::move(res);
    json verification;
    verification["reconstruction"] = verify_nef_decomposition(dec, d);
    verification["residual_nef"] = is_nef(dec.residual_ctx, dec.residual);
    report["verification"] = std::move(verification);
    std::cout << report.dump(2) << "\n";
    if (!report["verification"]["reconstruction"].get<bool>()) return exit_internal;
    return exit_ok;
}

int cmd_graph_chi(int delta, const std::string& graph_path, std::uint64_t seed) {
    LatticeContext ctx = LatticeContext::blowup_plane(delta);
    auto j = read_json_file(graph_path);
    if (!j) {
        std::cerr << "graph-chi: cannot read " << graph_path << "\n";
        return exit_usage;
    }
    DualGraph g = graph_from_json(*j);
    g.validate(ctx);
    json report;
    report["tangent_chi"] = tangent_chi(g, ctx);
    SectionCount sc = generic_h0_tangent(g, ctx, seed);
    report["h0"] = sc.h0;
    report["h1"] = sc.h1;
    report["conormal_chi"] = conormal_chi(g, ctx);
    json degrees = json::array();
    for (const auto& deg : conormal_degrees(g, ctx))
        degrees.push_back(deg ? json(*deg) : json("contracted"));
    report["conormal_degrees"] = std::move(degrees);
    json cot = json::array();
    for (const auto& [lo, hi] : cotangent_omega_degrees(g, ctx)) cot.push_back(json::array({lo, hi}));
    report["cotangent_degrees"] = std::move(cot);
    bool has_contracted = false;
    for (const auto& v : g.vertices) has_contracted = has_contracted || v.contracted();
    if (!has_contracted) report["unobstructed_sufficient"] = unobstructed_sufficient(g, ctx);
    std::cout << report.dump(2) << "\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact lattice toolkit for del Pezzo surfaces"};
    app.require_subcommand(1);

    int delta = 8;
    bool quadric = false;
    bool conics = false, exceptional = false;
    std::optional<Coeff> deg, sq;
    std::string out_path, class_spec, pair_spec, fix_spec, graph_path;
    std::string targets_name = "exceptional";
    std::size_t cap = delpezzo::default_orbit_cap;
    std::uint64_t seed = 1;

    auto* enumerate = app.add_subcommand("enumerate", "enumerate class catalogs as JSON lines");
    enumerate->add_option("--delta", delta, "number of blown-up points (0..8)")->required();
    enumerate->add_flag("--conics", conics, "conic classes (d=2, s=0)");
    enumerate->add_flag("--exceptional", exceptional, "(-1)-classes (d=1, s=-1)");
    enumerate->add_option("--deg", deg, "anticanonical degree");
    enumerate->add_option("--sq", sq, "self-intersection");
    enumerate->add_option("--out", out_path, "output file (default stdout)");

    auto* orbit = app.add_subcommand("orbit", "Weyl orbit reports");
    orbit->add_option("--delta", delta)->required();
    orbit->add_option("--class", class_spec, "class: coefficients a,b1,... or token (e8, l, -K)");
    orbit->add_option("--pair", pair_spec, "second conic: report the pair-orbit cell");
    orbit->add_option("--fix", fix_spec, "fixed class: partition targets under its stabilizer");
    orbit->add_option("--targets", targets_name, "stabilizer targets: exceptional|conics")
        ->check(CLI::IsMember({"exceptional", "conics"}));
    orbit->add_option("--cap", cap, "orbit size cap");

    auto* nef = app.add_subcommand("nef", "nef/ample membership");
    nef->add_option("--delta", delta);
    nef->add_flag("--quadric", quadric, "use the quadric surface lattice");
    nef->add_option("--class", class_spec)->required();

    auto* decompose = app.add_subcommand("decompose", "constructive nef decomposition");
    decompose->add_option("--delta", delta)->required();
    decompose->add_option("--class", class_spec)->required();

    auto* graph_chi = app.add_subcommand("graph-chi", "dual graph sheaf bookkeeping");
    graph_chi->add_option("--delta", delta)->required();
    graph_chi->add_option("--graph", graph_path, "dual graph JSON file")->required();
    graph_chi->add_option("--seed", seed, "seed for the generic section count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return exit_usage;
    }

    try {
        if (enumerate->parsed())
            return cmd_enumerate(delta, conics, exceptional, deg, sq, out_path);
        if (orbit->parsed())
            return cmd_orbit(delta, class_spec, pair_spec, fix_spec, targets_name, cap);
        if (nef->parsed()) return cmd_nef(delta, quadric, class_spec);
        if (decompose->parsed()) return cmd_decompose(delta, class_spec);
        if (graph_chi->parsed()) return cmd_graph_chi(delta, graph_path, seed);
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}
