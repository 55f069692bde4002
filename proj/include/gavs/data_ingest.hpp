#pragma once

#include <string>
#include <vector>

#include "gavs/model_fitness.hpp"
#include "gavs/predictor_space.hpp"

namespace gavs {

enum class Transform { none, wine_white, ctg_binary };

struct IngestSpec {
    std::string path;
    char delimiter = ',';
    std::string response_column;
    Transform transform = Transform::none;
    bool standardize = false;
    std::vector<std::string> drop_columns;
    bool suspect_is_abnormal = true;  // ctg: suspect grouped with pathologic
};

/// Load a delimited text file (header row required) into a Dataset,
/// applying the configured response transform.
Dataset load_delimited(const IngestSpec& spec);

/// wine quality score 0..10 -> 1 iff score >= 7
double wine_response(double quality);

/// ctg fetal state (normal/suspect/pathologic or 1/2/3) -> 0/1
double ctg_response(const std::string& label, bool suspect_is_abnormal = true);

void save_dataset(const Dataset& dataset, const std::string& path,
                  char delimiter = ',');

void save_truth(const std::vector<TermId>& terms, const PredictorSpace& space,
                const std::string& path);
std::vector<TermId> load_truth(const std::string& path,
                               const PredictorSpace& space);

}  // namespace gavs
