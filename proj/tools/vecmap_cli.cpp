// Copyright 2026 The vecmap Authors
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

#include "vecmap/config.hpp"
#include "vecmap/io.hpp"
#include "vecmap/occupancy_grid.hpp"
#include "vecmap/pipeline.hpp"
#include "vecmap/scan_simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{
struct RunArgs
{
  std::string config;
  std::string frames;
  std::string poses;
  std::string out;
  std::string metrics;
  std::string grid_dump;
  std::size_t grid_dump_every{10};
};

struct SimArgs
{
  std::string scene;
  std::string out_frames;
  std::string out_poses;
  std::uint64_t seed{0};
  std::string trajectory{"straight"};
  double length{10.0};
  double step{0.5};
  double radius{20.0};
  std::string format{"bin"};
  double noise{0.0};
};

double median(std::vector<double> v)
{
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int run(const RunArgs & args)
{
  const vecmap::PipelineConfig cfg = vecmap::load_config(args.config);
  vecmap::io::FrameStream stream(args.frames, args.poses, cfg.pose_gate);
  for (const auto & w : stream.warnings()) {
    std::cerr << "warning: " << w << '\n';
  }
  if (!args.grid_dump.empty()) {
    fs::create_directories(args.grid_dump);
  }

  vecmap::Pipeline pipeline(cfg);
  vecmap::io::OutputWriter writer(args.out, args.metrics);
  std::vector<double> t_grid;
  std::vector<double> t_vec;
  std::vector<double> t_total;
  std::size_t rejected = 0;

  while (auto frame = stream.next()) {
    vecmap::FrameOutput out;
    try {
      out = pipeline.process_frame(*frame);
    } catch (const vecmap::FrameRejected & e) {
      ++rejected;
      std::cerr << "warning: " << e.what() << '\n';
      continue;
    }
    writer.write(out);
    t_grid.push_back(out.metrics.t_grid_ms);
    t_vec.push_back(out.metrics.t_vec_ms);
    t_total.push_back(out.metrics.t_total_ms);

    const std::size_t index = writer.frames_written() - 1;
    if (!args.grid_dump.empty() && args.grid_dump_every > 0 && index % args.grid_dump_every == 0) {
      char name[32];
      std::snprintf(name, sizeof(name), "grid_%06zu.pgm", index);
      std::ofstream pgm(fs::path(args.grid_dump) / name, std::ios::binary);
      vecmap::write_pgm(pgm, *pipeline.grid(), cfg.grid);
    }
  }
  writer.close();

  std::cout << "frames: " << writer.frames_written() << " (dropped " << stream.dropped()
            << ", rejected " << rejected << ")\n"
            << "median ms: grid " << median(t_grid) << ", vectorization " << median(t_vec)
            << ", total " << median(t_total) << '\n';
  return 0;
}

int simulate(const SimArgs & args)
{
  vecmap::sim::Scene scene;
  if (const auto builtin = vecmap::sim::builtin_scene(args.scene)) {
    scene = *builtin;
  } else {
    scene = vecmap::sim::load_scene(args.scene);
  }
  const auto kind = args.trajectory == "arc" ? vecmap::sim::TrajectoryKind::Arc
                                              : vecmap::sim::TrajectoryKind::Straight;
  const auto poses = vecmap::sim::make_trajectory(kind, args.length, args.step, args.radius);

  vecmap::sim::LidarModel model = vecmap::sim::LidarModel::default_model();
  model.range_noise_sigma = args.noise;

  fs::create_directories(args.out_frames);
  const bool binary = args.format == "bin";
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto cloud = vecmap::sim::simulate_scan(scene, poses[i].pose, model, args.seed + i);
    const fs::path path =
      fs::path(args.out_frames) / vecmap::io::cloud_file_name(poses[i].timestamp, binary);
    if (binary) {
      vecmap::io::write_cloud_binary(path, cloud);
    } else {
      vecmap::io::write_cloud_text(path, cloud);
    }
  }
  vecmap::io::write_poses(args.out_poses, poses);
  std::cout << "wrote " << poses.size() << " frames to " << args.out_frames << '\n';
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"vecmap: LiDAR clouds to a rolling occupancy grid and convex obstacle polygons"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto * run_cmd = app.add_subcommand("run", "Process a recorded frame stream");
  run_cmd->add_option("--config", run_args.config, "key = value config file")->required();
  run_cmd->add_option("--frames", run_args.frames, "Directory of <timestamp>.txt|.bin clouds")
    ->required();
  run_cmd->add_option("--poses", run_args.poses, "Pose file: timestamp x y theta")->required();
  run_cmd->add_option("--out", run_args.out, "Polygon JSONL output")->required();
  run_cmd->add_option("--metrics", run_args.metrics, "Metrics CSV output")->required();
  run_cmd->add_option("--grid-dump", run_args.grid_dump, "Directory for PGM grid snapshots");
  run_cmd->add_option("--grid-dump-every", run_args.grid_dump_every, "Snapshot period in frames");

  SimArgs sim_args;
  auto * sim_cmd = app.add_subcommand("sim", "Generate a synthetic frame stream");
  sim_cmd->add_option("--scene", sim_args.scene, "Built-in scene name or scene file")->required();
  sim_cmd->add_option("--out-frames", sim_args.out_frames, "Output cloud directory")->required();
  sim_cmd->add_option("--out-poses", sim_args.out_poses, "Output pose file")->required();
  sim_cmd->add_option("--seed", sim_args.seed, "Noise seed");
  sim_cmd->add_option("--trajectory", sim_args.trajectory, "straight or arc")
    ->check(CLI::IsMember({"straight", "arc"}));
  sim_cmd->add_option("--length", sim_args.length, "Path length [m]");
  sim_cmd->add_option("--step", sim_args.step, "Distance between frames [m]");
  sim_cmd->add_option("--radius", sim_args.radius, "Arc radius [m]");
  sim_cmd->add_option("--format", sim_args.format, "Cloud file format")
    ->check(CLI::IsMember({"bin", "txt"}));
  sim_cmd->add_option("--noise", sim_args.noise, "Range noise sigma [m]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      return run(run_args);
    }
    return simulate(sim_args);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
