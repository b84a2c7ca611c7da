#pragma once

#include <string>
#include <vector>

#include "bvarx/szbvar.hpp"

namespace bvarx {

// JSON layouts. Matrices are {"rows": r, "cols": c, "data": [row-major values]}.

std::string hyper_to_json(const SzHyper& hyper);
/// Accepts either a bare tuple object or one nested under "hyper".
SzHyper hyper_from_json(const std::string& text);

std::string posterior_to_json(const MniwPosterior& post);
MniwPosterior posterior_from_json(const std::string& text);

/// Array of {"mu", "phi": [...], "gamma", "sigma", "stable", "spectral_radius"}.
std::string draws_to_json(const std::vector<ParamDraw>& draws);
std::vector<ParamDraw> draws_from_json(const std::string& text);

}  // namespace bvarx
