#pragma once

#include <functional>
#include <vector>

#include "json.hpp"

#include "duvio/dataio/types.hpp"
#include "duvio/dehaze/generator.hpp"
#include "duvio/vionet/model.hpp"

namespace duvio {

// Windows of one sequence in frame order; clips never cross sequences.
using WindowSequence = std::vector<SampleWindow>;

struct VioEpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean over the epoch's batches
  double val_loss = 0.0;    // NaN without validation windows
};

struct VioTrainResult {
  VioNet net;
  double initial_train_loss = 0.0;
  double final_train_loss = 0.0;
  std::vector<VioEpochLog> log;
};

nlohmann::json to_json(const VioTrainResult& result);

using VioProgress = std::function<void(const VioEpochLog&)>;

// Windows must hold rasters at the configured network size, except with
// joint_dehaze_finetune where they hold dehazer-sized rasters. Without joint
// fine-tuning the dehazer is applied once per frame and never updated.
VioTrainResult train_vio(const std::vector<WindowSequence>& train,
                         const std::vector<WindowSequence>& val, const VioConfig& cfg,
                         Generator* dehazer = nullptr, const VioProgress& progress = {});

// Pose loss of `net` over whole sequences, each as one rollout.
double evaluate_vio(const VioNet& net, const std::vector<WindowSequence>& sequences);

// Sequences -> windows at the network input size (dehazed first if given).
std::vector<WindowSequence> prepare_windows(const std::vector<SequenceDataset>& sequences,
                                            const VioConfig& cfg, const Generator* dehazer = nullptr);

}  // namespace duvio
