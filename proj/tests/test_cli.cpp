#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>

#include "ffdpat/field.hpp"
#include "ffdpat/xray.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

const char* kTiny =
    "source.n = 41\nsource.half_width = 0.5\n"
    "solver.n = 129\nsolver.half_width = 1.6\n"
    "phantom.kind = smooth_bumps\nphantom.support_radius = 0.4\n"
    "phantom.component.0 = 0.05 0 0.3 1 0\n"
    "sound_speed.ring_radius = 0.3\nsound_speed.ring_width = 0.08\n"
    "wave.t_final = 0.6\n"
    "detector.n_angles = 32\ndetector.half_width = 1.0\n"
    "mask.half_width = 0.3\n"
    "recon.max_iters = 3\n";

int run(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(FFDPAT_CLI_PATH) + " " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("cli simulate, reconstruct and evaluate") {
  testing::TempDir dir("cli");
  const fs::path cfg = write_config(dir.path, "tiny.txt", kTiny);
  const fs::path log = dir.path / "log.txt";
  const std::string base = "--config \"" + cfg.string() + "\" ";

  REQUIRE(run("simulate " + base + "--out \"" + (dir.path / "a").string() + "\"", log) == 0);
  for (const char* f : {"h_true.f2d", "pressure_T.f2d", "sound_speed.f2d", "sinogram_clean.sno",
                        "sinogram_noisy.sno", "mask.sno", "config.txt", "manifest.json"}) {
    CHECK(fs::exists(dir.path / "a" / f));
  }
  CHECK(slurp(log).find("noise relative error") != std::string::npos);

  // same seed reproduces the files bit for bit
  REQUIRE(run("simulate " + base + "--out \"" + (dir.path / "b").string() + "\"", log) == 0);
  CHECK(slurp(dir.path / "a" / "sinogram_noisy.sno") ==
        slurp(dir.path / "b" / "sinogram_noisy.sno"));
  CHECK(slurp(dir.path / "a" / "h_true.f2d") == slurp(dir.path / "b" / "h_true.f2d"));

  // the written config reloads to the same run
  REQUIRE(run("simulate --config \"" + (dir.path / "a" / "config.txt").string() + "\" --out \"" +
                  (dir.path / "c").string() + "\"",
              log) == 0);
  CHECK(slurp(dir.path / "a" / "sinogram_noisy.sno") ==
        slurp(dir.path / "c" / "sinogram_noisy.sno"));

  for (const char* alg : {"landweber_one_step", "proximal_one_step", "proximal_two_step"}) {
    const fs::path out = dir.path / alg;
    REQUIRE(run("reconstruct " + base + "--algorithm " + alg + " --data \"" +
                    (dir.path / "a").string() + "\" --out \"" + out.string() + "\"",
                log) == 0);
    CHECK(fs::exists(out / "recon.f2d"));
    CHECK(fs::exists(out / "recon.pgm"));
    const std::string csv = slurp(out / "iterations.csv");
    CHECK(csv.starts_with("iter,objective,rel_l2_error,wall_ms\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }

  // evaluate against itself and against zero
  const std::string truth = "\"" + (dir.path / "a" / "h_true.f2d").string() + "\"";
  REQUIRE(run("evaluate " + truth + " " + truth, log) == 0);
  CHECK(slurp(log).find("relative L2 error 0\n") != std::string::npos);

  const ffdpat::ScalarField2D h = ffdpat::read_f2d(dir.path / "a" / "h_true.f2d");
  ffdpat::write_f2d(dir.path / "zero.f2d", ffdpat::ScalarField2D(h.grid()));
  ffdpat::write_f2d(dir.path / "near.f2d", 1.1 * h);
  REQUIRE(run("evaluate \"" + (dir.path / "zero.f2d").string() + "\" " + truth + " --out \"" +
                  dir.path.string() + "\"",
              log) == 0);
  CHECK(slurp(log).find("relative L2 error 1\n") != std::string::npos);
  CHECK(slurp(dir.path / "difference.pgm").starts_with("P5"));
  REQUIRE(run("evaluate \"" + (dir.path / "near.f2d").string() + "\" " + truth, log) == 0);
  CHECK(slurp(log).find("relative L2 error 0.1") != std::string::npos);
}

TEST_CASE("cli zero phantom gives zero data") {
  testing::TempDir dir("cli0");
  std::string text = kTiny;
  text.replace(text.find("0.05 0 0.3 1 0"), 14, "0.05 0 0.3 0 0");
  const fs::path cfg0 = write_config(dir.path, "zero0.txt", text);
  const fs::path log = dir.path / "log.txt";
  REQUIRE(run("simulate --config \"" + cfg0.string() + "\" --out \"" + dir.path.string() + "\"",
              log) == 0);
  const ffdpat::Sinogram g = ffdpat::read_sno(dir.path / "sinogram_noisy.sno");
  for (double v : g.values()) CHECK(v == 0.0);
  CHECK(ffdpat::max_abs(ffdpat::read_f2d(dir.path / "pressure_T.f2d")) == 0.0);
}

TEST_CASE("cli exit codes") {
  testing::TempDir dir("clix");
  const fs::path log = dir.path / "log.txt";
  const fs::path cfg = write_config(dir.path, "tiny.txt", kTiny);

  CHECK(run("", log) == 2);
  CHECK(run("simulate --scale huge", log) == 2);
  CHECK(run("simulate --config \"" + (dir.path / "missing.txt").string() + "\"", log) == 3);
  const fs::path bad = write_config(dir.path, "bad.txt", std::string(kTiny) + "wave.colour = 1\n");
  CHECK(run("simulate --config \"" + bad.string() + "\"", log) == 2);
  CHECK(slurp(log).find("line 15") != std::string::npos);
  std::string narrow_text = kTiny;
  narrow_text.replace(narrow_text.find("half_width = 1.0"), 16, "half_width = 0.8");
  const fs::path narrow = write_config(dir.path, "narrow.txt", narrow_text);
  CHECK(run("simulate --config \"" + narrow.string() + "\"", log) == 2);
  CHECK(run("reconstruct --config \"" + cfg.string() + "\" --data \"" +
                (dir.path / "nothing").string() + "\"",
            log) == 3);
  CHECK(run("evaluate \"" + (dir.path / "x.f2d").string() + "\" \"" +
                (dir.path / "y.f2d").string() + "\"",
            log) == 3);

  const std::string out = "--out \"" + (dir.path / "d").string() + "\"";
  REQUIRE(run("simulate --config \"" + cfg.string() + "\" " + out, log) == 0);
  const fs::path wild = write_config(dir.path, "wild.txt",
                                     std::string(kTiny) + "recon.step_size = 1e5\n"
                                                          "recon.lambda = 0\n"
                                                          "recon.algorithm = landweber_one_step\n");
  CHECK(run("reconstruct --config \"" + wild.string() + "\" " + out, log) == 4);

  CHECK(run("selftest", log) == 0);
  CHECK(run("selftest --inject-adjoint-fault", log) == 5);
  CHECK(run("adjoint-test --pairs 2 --config \"" + cfg.string() + "\"", log) == 0);
}
