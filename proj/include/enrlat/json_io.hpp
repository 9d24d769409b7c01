#pragma once

#include "enrlat/discriminant.hpp"
#include "enrlat/enumerate.hpp"
#include "enrlat/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace enrlat {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

Json lattice_to_json(const IntegerLattice& l);
LatticePtr lattice_from_json(const Json& j, bool allow_degenerate = false);

DualGraph graph_from_json(const Json& j);

Json model_to_json(const SurfaceModel& m);
SurfaceModel model_from_json(const Json& j);
SurfaceModel load_model(const std::filesystem::path& p);

Json report_to_json(const ModelReport& r, const SurfaceModel& m);

Json sequence_to_json(const IsotropicSequence& s);
Json polarization_to_json(const Polarization& p);
Polarization polarization_from_json(const Json& j, const LatticePtr& lattice);

Json enumeration_to_json(const EnumerationResult& r,
                         const std::vector<std::size_t>* orbit_sizes = nullptr);
std::string enumeration_to_csv(const EnumerationResult& r,
                               const std::vector<std::size_t>* orbit_sizes = nullptr);
std::vector<Polarization> reps_from_json(const Json& j, const LatticePtr& lattice);

Json invariants_to_json(const Invariants& inv);

Json certificate_to_json(const BoundCertificate& c);
BoundCertificate certificate_from_json(const Json& j, const LatticePtr& lattice);

Json discriminant_to_json(const DiscriminantData& d);

} // namespace enrlat
