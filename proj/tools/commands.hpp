#pragma once

#include "laxary/config.hpp"

namespace laxary::cli {

int cmd_ingest(RunConfig config);
int cmd_build_dict(RunConfig config);
int cmd_score(RunConfig config);
int cmd_fill(RunConfig config, bool explain);
int cmd_baseline(RunConfig config);
int cmd_eval(RunConfig config);
int cmd_synth(RunConfig config);

}  // namespace laxary::cli
