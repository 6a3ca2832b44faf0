#pragma once

#include <string>

#include "chainamp/amplify.hpp"
#include "chainamp/chain_bell.hpp"
#include "chainamp/prob_dist.hpp"
#include "chainamp/simulate.hpp"
#include "chainamp/sv_source.hpp"

// JSON and CSV encodings of the shared artifacts.  Real numbers are written
// with 15 significant digits; non-finite values become JSON null.

namespace chainamp {

std::string fmt15(double v);

ProbDist prob_dist_from_json_text(const std::string& text);
std::string prob_dist_to_json_text(const ProbDist& dist);

Box box_from_json_text(const std::string& text);
std::string box_to_json_text(const Box& box);

std::string decomposition_to_json_text(const ConvexDecomposition& dec);
ConvexDecomposition decomposition_from_json_text(const std::string& text);

std::string sv_report_to_json_text(const SvReport<double>& rep);

// Strategy files carry the source part and the box mixture; r fixes the
// expected bit width and box size.
AdversaryStrategy strategy_from_json_text(const std::string& text, int r);

std::string sim_report_to_json_text(const SimReport& rep);

std::string protocol_report_to_json_text(const ProtocolReport& rep);
std::string protocol_report_csv_header();
std::string protocol_report_to_csv_row(const ProtocolReport& rep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace chainamp
