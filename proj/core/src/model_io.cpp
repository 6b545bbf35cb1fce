#include <fstream>

#include "igbot/classifiers.hpp"
#include "igbot/error.hpp"

namespace igbot {

namespace {

constexpr const char* kFormat = "igbot.model";

}  // namespace

nlohmann::ordered_json to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["version"] = kModelFormatVersion;
  j["spec"] = to_json(model.spec());
  j["feature_names"] = model.feature_names();
  j["scaling"] = model.scaling() ? to_json(*model.scaling()) : nlohmann::ordered_json(nullptr);
  j["state"] = std::visit([](const auto& m) { return m.to_json(); }, model.state());
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != kFormat) throw DataError("not an igbot model artifact");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model artifact version " + std::to_string(version));
    }
    const ModelSpec spec = model_spec_from_json(j.at("spec"));
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    const auto& s = j.at("state");
    ModelState state = [&]() -> ModelState {
      switch (spec.kind()) {
        case ModelKind::gnb:
          return GaussianNB::from_json(s);
        case ModelKind::knn:
          return KnnClassifier::from_json(std::get<KnnParams>(spec.params), s);
        case ModelKind::dtree:
          return DecisionTree::from_json(s);
        case ModelKind::svm:
          return SvmClassifier::from_json(s);
        case ModelKind::rforest:
          return RandomForest::from_json(s);
        case ModelKind::adaboost:
          return AdaBoostSamme::from_json(s);
      }
      throw DataError("unknown model kind");
    }();
    std::optional<StandardizationParams> scaling;
    if (j.contains("scaling") && !j.at("scaling").is_null()) {
      scaling = standardization_from_json(j.at("scaling"));
    }
    return TrainedModel(spec, std::move(names), std::make_shared<const ModelState>(std::move(state)),
                        std::move(scaling));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model artifact: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model artifact: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model '" + path.string() + "'");
  out << to_json(model).dump(1) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed model artifact '" + path.string() + "': " + e.what());
  }
  return model_from_json(j);
}

}  // namespace igbot
