#pragma once

#include <iosfwd>
#include <string>

#include "qbfmap/model.hpp"

namespace qbfmap {

// JSON serialization for model bundles and configurations.  A model bundle
// ties the structural CircuitModel to the TargetFunction it is meant to
// implement, so verification can run from files alone.
//
// Model bundle keys: version, signals[{id,name,kind}], inputs, outputs,
// primitives[{kind,inputs,config,outputs}], target{kind,...}.
// Configuration keys: version, bits[{id,name,value}] sorted by id.

struct ModelBundle {
  CircuitModel model;
  TargetFunction target;
};

void save_model(std::ostream& os, const CircuitModel& model, const TargetFunction& target);
ModelBundle load_model(std::istream& is);

// `model` adds signal names next to ids; pass nullptr to omit them.
void save_configuration(std::ostream& os, const Configuration& config,
                        const CircuitModel* model = nullptr);
Configuration load_configuration(std::istream& is);

} // namespace qbfmap
