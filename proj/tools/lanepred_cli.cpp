// Copyright 2026 The lanepred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <string>

#include "lanepred/cli/commands.hpp"

namespace
{

template<typename T>
void add_common(CLI::App * sub, T & opts)
{
  sub->add_option("--config", opts.common.config, "Run config (JSON)");
  sub->add_option("--seed", opts.common.seed, "Seed override");
  sub->add_flag("--quiet", opts.common.quiet, "Only report errors");
}

}  // namespace

int main(int argc, char ** argv)
{
  using namespace lanepred::cli;

  CLI::App app{"Lane-aware multi-hypothesis trajectory prediction"};
  app.require_subcommand(1);

  GenOptions gen;
  auto * g = app.add_subcommand("gen", "Generate synthetic scenarios as JSONL");
  add_common(g, gen);
  g->add_option("--out", gen.out, "Output scenario file")->required();
  g->add_option("--n-scenarios", gen.n_scenarios, "Number of scenarios");
  g->add_option("--topology", gen.topology, "straight, fork, curve or mixed");

  PreprocessOptions pre;
  auto * p = app.add_subcommand("preprocess", "Turn scenarios into labelled instances");
  add_common(p, pre);
  p->add_option("--in", pre.in, "Input scenario file")->required();
  p->add_option("--out", pre.out, "Output instance file")->required();

  TrainOptions tr;
  auto * t = app.add_subcommand("train", "Train a model");
  add_common(t, tr);
  t->add_option("--data", tr.data, "Training instances")->required();
  t->add_option("--val", tr.val, "Validation instances");
  t->add_option("--out-dir", tr.out_dir, "Directory for checkpoints and reports")->required();
  t->add_option("--max-epochs", tr.max_epochs, "Epoch limit override");

  EvalOptions ev;
  auto * e = app.add_subcommand("eval", "Compute ADE/FDE for a checkpoint");
  add_common(e, ev);
  e->add_option("--data", ev.data, "Instances")->required();
  e->add_option("--checkpoint", ev.checkpoint, "Checkpoint prefix or file")->required();
  e->add_option("--out-dir", ev.out_dir, "Directory for metrics.csv and metrics.json")
  ->required();
  e->add_option("--k", ev.k, "Comma-separated k values, e.g. 1,5");
  e->add_flag("--baseline", ev.baseline, "Also evaluate constant-velocity extrapolation");

  PredictOptions pr;
  auto * d = app.add_subcommand("predict", "Dump predicted trajectories as JSONL");
  add_common(d, pr);
  d->add_option("--data", pr.data, "Instances")->required();
  d->add_option("--checkpoint", pr.checkpoint, "Checkpoint prefix or file")->required();
  d->add_option("--out", pr.out, "Output prediction file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsageError;
  }

  if (*g) {
    return cmd_gen(gen);
  }
  if (*p) {
    return cmd_preprocess(pre);
  }
  if (*t) {
    return cmd_train(tr);
  }
  if (*e) {
    return cmd_eval(ev);
  }
  return cmd_predict(pr);
}
