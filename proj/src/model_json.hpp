#pragma once

// JSON (de)serialization helpers shared by the model and CLI translation
// units.  Not part of the public interface.

#include <json.hpp>

#include "rmode/model.hpp"

namespace rmode::model::detail {

nlohmann::json model_to_json(const VarianceModel& model);
VarianceModel model_from_json(const nlohmann::json& node);

}  // namespace rmode::model::detail
