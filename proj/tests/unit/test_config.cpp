#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

#include <gtest/gtest.h>

#include "molgate/config.hpp"
#include "molgate/errors.hpp"

using namespace molgate;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("molgate_cfg_" + name);
  std::ofstream(p) << body;
  return p;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, DefaultsAreTheHeadlineConfiguration) {
  const auto c = RunConfig::defaults();
  EXPECT_DOUBLE_EQ(c.pulse_width, 0.234);
  EXPECT_DOUBLE_EQ(c.target_phase, std::numbers::pi);
  EXPECT_DOUBLE_EQ(c.resolved_relative_phase(), std::numbers::pi);
  EXPECT_EQ(c.n_max, 40);
  EXPECT_DOUBLE_EQ(c.omega_over_Omega, 1.0);
  EXPECT_EQ(c.average_samples, 21);
  EXPECT_EQ(c.resolved_steps(Tier::Internal), 4000);
  EXPECT_EQ(c.resolved_steps(Tier::Composite), 1000);
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(c.pulses().peak_rabi(), 6.749926733, 1e-8);
  const auto space = c.motional_space(4.0, 0.1);
  EXPECT_NEAR(space.j0, 4.0 * c.pulses().peak_rabi(), 1e-12);
  EXPECT_NEAR(space.omega, c.pulses().peak_rabi(), 1e-12);
}

TEST(Config, LoadsKeyValueFile) {
  const auto p = write_temp("ok.ini",
                            "# comment\n; other comment\nJ = 3.5\ntheta = 1.25\nn_max = 20\n"
                            "fig2_inputs = vac, thermal(0.5)\nfig2_ratios = 0.05,0.1\n"
                            "trap = false\ntier = composite\n");
  const auto c = RunConfig::load(p);
  EXPECT_DOUBLE_EQ(c.ddi, 3.5);
  EXPECT_DOUBLE_EQ(c.resolved_relative_phase(), 1.25);
  EXPECT_EQ(c.n_max, 20);
  ASSERT_EQ(c.fig2_inputs.size(), 2u);
  EXPECT_EQ(c.fig2_inputs[1], "thermal(0.5)");
  EXPECT_EQ(c.fig2_ratios, (std::vector<double>{0.05, 0.1}));
  EXPECT_FALSE(c.include_trap);
  EXPECT_EQ(c.tier, Tier::Composite);
}

TEST(Config, ErrorsNameTheFileLineOrField) {
  const auto bad_line = write_temp("bad_line.ini", "J = 4\nthis line has no equals\n");
  const auto msg = message_of([&] { RunConfig::load(bad_line); });
  EXPECT_NE(msg.find(bad_line.string() + ":2"), std::string::npos) << msg;

  const auto unknown = write_temp("unknown.ini", "colour = blue\n");
  EXPECT_NE(message_of([&] { RunConfig::load(unknown); }).find("colour"), std::string::npos);

  const auto bad_value = write_temp("bad_value.ini", "J = four\n");
  EXPECT_NE(message_of([&] { RunConfig::load(bad_value); }).find("'J'"), std::string::npos);

  const auto section = write_temp("section.ini", "[run]\nJ = 4\n");
  EXPECT_THROW(RunConfig::load(section), ConfigError);

  EXPECT_THROW(RunConfig::load("/nonexistent/molgate.ini"), ConfigError);
}

TEST(Config, Validation) {
  auto c = RunConfig::defaults();
  c.ddi = 0.0;
  EXPECT_NE(message_of([&] { c.validate(); }).find("--no-ddi-check"), std::string::npos);
  c.ddi_check = false;
  EXPECT_NO_THROW(c.validate());

  c = RunConfig::defaults();
  c.steps_per_pulse = 301;
  EXPECT_THROW(c.validate(), ConfigError);
  c.steps_per_pulse = 300;
  EXPECT_NO_THROW(c.validate());

  c = RunConfig::defaults();
  c.pulse_width = 1.2;
  EXPECT_THROW(c.validate(), ConfigError);

  c = RunConfig::defaults();
  c.motional_state = "thermal(2)";
  c.n_max = 10;
  EXPECT_THROW(c.validate(), ConfigError);

  EXPECT_THROW(c.set("threads", "-1"), ConfigError);
  EXPECT_THROW(c.set("tier", "quantum"), ConfigError);
  EXPECT_THROW(c.set("fidelity_construction", "partial"), ConfigError);
  c.set("steps_per_pulse", "auto");
  EXPECT_FALSE(c.steps_per_pulse.has_value());
}

TEST(Config, EchoAndJson) {
  auto c = RunConfig::defaults();
  const auto echo = c.echo();
  ASSERT_FALSE(echo.empty());
  EXPECT_EQ(echo.front().first, "tier");
  bool has_omega = false;
  for (const auto& [k, v] : echo) has_omega |= k == "Omega_T";
  EXPECT_TRUE(has_omega);
  EXPECT_EQ(c.to_json()["n_max"], "40");
  for (const auto& key : RunConfig::keys()) EXPECT_FALSE(key.empty());
}

TEST(Config, OutputDirectoryFromEnvironment) {
  ::setenv("MOLGATE_OUT_DIR", "/tmp/molgate-env-out", 1);
  EXPECT_EQ(RunConfig::defaults().out_dir, "/tmp/molgate-env-out");
  ::unsetenv("MOLGATE_OUT_DIR");
  EXPECT_EQ(RunConfig::defaults().out_dir, "molgate-out");
}

TEST(Config, Linspace) {
  const auto g = linspace(3.0, 5.0, 21);
  ASSERT_EQ(g.size(), 21u);
  EXPECT_DOUBLE_EQ(g[10], 4.0);
  EXPECT_DOUBLE_EQ(g.back(), 5.0);
  EXPECT_EQ(linspace(2.0, 9.0, 1), std::vector<double>{2.0});
  EXPECT_THROW(linspace(0.0, 1.0, 0), std::invalid_argument);
}
