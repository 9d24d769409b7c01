// Regenerates the shipped model fixtures: the configuration graphs embedded
// into the rank-10 lattice as curve-class lists. Deterministic, so the files
// in fixtures/ can be rebuilt and diffed.

#include "enrlat/boxscan.hpp"
#include "enrlat/isotropic.hpp"
#include "enrlat/json_io.hpp"
#include "enrlat/model.hpp"

#include <iostream>

using namespace enrlat;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make-fixtures <fixtures-dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    auto l10 = make_l10();

    auto build = [&](const std::string& graph_file, const std::string& model_file,
                     const std::string& name, int box) {
        DualGraph g = graph_from_json(read_json_file(dir / graph_file));
        Embedding emb = embed_by_graph(l10, g, box);
        SurfaceModel m;
        m.name = name;
        m.lattice = l10;
        for (int j = 0; j < emb.source()->rank(); ++j) m.curves.push_back(emb.column(j));
        ModelReport r = validate_model(m);
        if (!r.valid()) {
            std::cerr << model_file << ": generated model failed validation\n";
            return false;
        }
        write_text_file(dir / model_file, model_to_json(m).dump(1) + "\n");
        std::cout << model_file << ": " << m.curves.size() << " curves\n";
        return true;
    };

    // a small worked model: the first length-10 sequence with two positions
    // degenerated into an A2-chain, so enumeration output has mixed
    // nondegeneracy
    auto build_toy = [&]() {
        SequenceSearchOptions opts;
        opts.box = 1;
        opts.max_count = 1;
        auto found = find_isotropic_sequences(l10, 10, opts);
        if (found.size() != 1) {
            std::cerr << "toy-model.json: base sequence search failed\n";
            return false;
        }
        const auto& base = found[0];
        SurfaceModel m;
        m.name = "toy";
        m.lattice = l10;
        for (std::size_t i = 0; i < 10; ++i) {
            if (i == 5 || i == 6) {
                Vec r(10);
                for (int k = 0; k < 10; ++k) r[k] = base.entries[i][k] - base.entries[i - 1][k];
                m.curves.push_back(r);
            } else {
                m.halffibers.push_back(base.entries[i]);
            }
        }
        if (!validate_model(m).valid()) {
            std::cerr << "toy-model.json: generated model failed validation\n";
            return false;
        }
        write_text_file(dir / "toy-model.json", model_to_json(m).dump(1) + "\n");
        std::cout << "toy-model.json: " << m.halffibers.size() << " halffibers, "
                  << m.curves.size() << " curves\n";
        return true;
    };

    // both fibration families over one base sequence, plus the reflection
    // across f_2 - f_1 (an isometry preserving the fiber set), so orbit
    // reduction and both invariants are exercised offline
    auto build_mixed = [&]() {
        SequenceSearchOptions opts;
        opts.box = 1;
        opts.max_count = 1;
        auto found = find_isotropic_sequences(l10, 10, opts);
        if (found.size() != 1) return false;
        const auto& base = found[0];
        Vec sum = base.entry_sum();
        Vec h(10);
        for (int k = 0; k < 10; ++k) h[k] = sum[k] / 3;

        SurfaceModel m;
        m.name = "mixed";
        m.lattice = l10;
        m.halffibers = base.entries;
        for (std::size_t i = 0; i < 9; ++i) {
            Vec gi(10);
            for (int k = 0; k < 10; ++k) gi[k] = h[k] - base.entries[i][k] - base.entries[9][k];
            m.halffibers.push_back(gi);
        }
        Vec r(10);
        for (int k = 0; k < 10; ++k) r[k] = base.entries[1][k] - base.entries[0][k];
        Mat64 refl(10, 10);
        for (int j = 0; j < 10; ++j) {
            Vec ej(10, 0);
            ej[j] = 1;
            Vec img = reflect_raw(l10->gram(), r, ej);
            for (int i = 0; i < 10; ++i) refl(i, j) = img[i];
        }
        m.isometries.push_back(refl);
        if (!validate_model(m).valid()) {
            std::cerr << "mixed-model.json: generated model failed validation\n";
            return false;
        }
        write_text_file(dir / "mixed-model.json", model_to_json(m).dump(1) + "\n");
        std::cout << "mixed-model.json: " << m.halffibers.size() << " halffibers, 1 isometry\n";
        return true;
    };

    bool ok = build("config-a-graph.json", "config-a.json", "config-a", 3) &&
              build("config-b-graph.json", "config-b.json", "config-b", 3) && build_toy() &&
              build_mixed();
    return ok ? 0 : 1;
}
