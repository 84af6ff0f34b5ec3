#pragma once

#include <string>
#include <vector>

#include "rieszcert/config.hpp"
#include "rieszcert/instance.hpp"
#include "rieszcert/report.hpp"

namespace rieszcert {

struct PipelineOptions {
  bool bounds_only = false;  // hypothesis, contour projections, partial sums and bounds
};

/// Names of the bound reports in the order they appear in a report.
const std::vector<std::string>& bound_names();
/// Names of the stages in execution order.
const std::vector<std::string>& stage_names();

InstanceEcho echo_instance(const InstanceSpec& spec, const Instance& instance);

/// Runs every stage in order and collects the results. Stage errors are captured; a stage
/// whose inputs are missing is marked skipped.
CertificationReport run_certification(const PerturbedPair& pair, const SegmentFamily& family,
                                      const RunConfig& config, InstanceEcho echo,
                                      const PipelineOptions& options = {});

/// generate_instance(config.instance) followed by run_certification.
CertificationReport certify(const RunConfig& config, const PipelineOptions& options = {});

/// 0 when everything passes, 1 on a failed check, 3 on a numerical error under the hypothesis.
int exit_code_for(const CertificationReport& report);

}  // namespace rieszcert
