#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "symspec/cli.hpp"

using namespace symspec;
using namespace symspec::cli;

namespace {

RunConfig config(Command command, const std::string& model, Format format = Format::table) {
  RunConfig c;
  c.command = command;
  c.model_source = model;
  c.format = format;
  return c;
}

RunConfig verify(const std::string& model, const std::string& suites) {
  RunConfig c = config(Command::verify, model);
  c.suites = parse_suites(suites);
  return c;
}

struct Process {
  int status = -1;
  std::string out;
};

Process run_binary(const std::string& args) {
  Process p;
  std::string cmd = std::string(SYMSPEC_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  int raw = pclose(pipe);
  p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return p;
}

}  // namespace

TEST(Config, RejectsUnknownSuitesAndFormats) {
  EXPECT_THROW(parse_suites("eq1,bogus"), UsageError);
  EXPECT_THROW(parse_suites(""), UsageError);
  EXPECT_EQ(parse_suites("thm1,stab,thm1"), (std::vector<std::string>{"thm1", "stab"}));
  EXPECT_THROW(parse_format("yaml"), UsageError);
  EXPECT_EQ(parse_format("json"), Format::json);
}

TEST(Config, LoadsBuiltinsAndFiles) {
  EXPECT_EQ(load_model("kt4"), builtin("kt4"));
  EXPECT_EQ(load_model(SYMSPEC_MODELS_DIR "/kt4.json"), builtin("kt4"));
  EXPECT_THROW(load_model("no-such-model"), ModelError);
}

TEST(Run, TwoTorusPageTable) {
  Outcome o = execute(config(Command::pages, "t2"));
  EXPECT_EQ(o.exit_code, kPass);
  const std::string expected_last_page =
      "E_2\n"
      "  q\\p 0 1\n"
      "    1 2 1\n"
      "    0 1 ·\n";
  EXPECT_NE(o.out.find(expected_last_page), std::string::npos) << o.out;
  EXPECT_EQ(o.out.find("E_3"), std::string::npos);
  EXPECT_NE(o.out.find("stabilization page 0"), std::string::npos);
}

TEST(Run, MaxPageOption) {
  RunConfig c = config(Command::pages, "kt4");
  c.max_page = 4;
  Report r = run(c);
  EXPECT_EQ(r.pages.size(), 5u);
  EXPECT_EQ(r.stabilization_page, 2);
  c.max_page = -1;
  EXPECT_EQ(execute(c).exit_code, kUsage);
}

TEST(Run, KodairaThurstonSequenceAndStabilization) {
  Report r = run(verify("kt4", "thm1,stab"));
  EXPECT_EQ(r.exit_code(), kPass);
  EXPECT_EQ(r.stabilization_page, 2);
  int exact_columns = 0;
  for (const auto& v : r.verdicts) {
    if (v.name.rfind("Theorem 1", 0) == 0) {
      EXPECT_TRUE(v.pass);
      ++exact_columns;
    }
  }
  EXPECT_EQ(exact_columns, 3);
}

TEST(Run, EverySuiteOnTheFourTorus) {
  Report r = run(verify("t4", "eq1,hodge-lepage,props,thm1,stab,harmonic,symmetry"));
  for (const auto& v : r.verdicts) EXPECT_TRUE(v.pass) << v.name << " " << v.witness;
  EXPECT_EQ(r.exit_code(), kPass);
}

TEST(Run, HarmonicCommandOnKodairaThurston) {
  Outcome o = execute(config(Command::harmonic, "kt4"));
  EXPECT_EQ(o.exit_code, kPass);
  EXPECT_NE(o.out.find("verdict: not harmonic"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("witness degree 1"), std::string::npos);
  EXPECT_NE(o.out.find("PASS  Theorem 5: three harmonicity oracles agree"), std::string::npos);
}

TEST(Run, ClosedTypeSuitesFlagExactOmega) {
  EXPECT_EQ(run(verify("solv2", "harmonic")).exit_code(), kFinding);
  EXPECT_EQ(run(verify("solv2", "symmetry")).exit_code(), kFinding);
  EXPECT_EQ(run(verify("solv2", "thm1,stab")).exit_code(), kPass);
  Outcome o = execute(config(Command::harmonic, "solv2"));
  EXPECT_EQ(o.exit_code, kPass);
  EXPECT_NE(o.out.find("not applicable"), std::string::npos);
}

TEST(Run, BrokenModelIsUsageError) {
  EXPECT_EQ(execute(config(Command::pages, SYMSPEC_MODELS_DIR "/broken.json")).exit_code, kUsage);
  EXPECT_EQ(execute(config(Command::pages, "nope")).exit_code, kUsage);
}

TEST(Render, DeterministicAndKeySorted) {
  RunConfig c = config(Command::pages, "kt4", Format::json);
  std::string first = execute(c).out, second = execute(c).out;
  EXPECT_EQ(first, second);
  nlohmann::json doc = nlohmann::json::parse(first);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  for (const auto* key : {"model", "pages", "stabilization_page", "verdicts"}) EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_EQ(doc["pages"]["2"]["0,2"], 3);
  EXPECT_FALSE(doc["pages"]["2"].contains("2,0"));
}

TEST(Render, JsonPagesRoundTrip) {
  for (const auto& name : builtin_names()) {
    Report r = run(config(Command::pages, name, Format::json));
    nlohmann::json doc = nlohmann::json::parse(render(r, Format::json));
    EXPECT_EQ(parse_pages_json(doc["pages"]), r.pages) << name;
  }
}

TEST(Render, ModelsList) {
  RunConfig c;
  c.command = Command::models;
  Outcome o = execute(c);
  EXPECT_EQ(o.out, "t2\nt4\nt6\nkt4\nsolv2\nsolv4\nkt4xt2\n");
}

TEST(Binary, ExitCodeContract) {
  EXPECT_EQ(run_binary("models list").status, 0);
  EXPECT_EQ(run_binary("pages --model t2").status, 0);
  EXPECT_EQ(run_binary("verify --model kt4 --suites thm1,stab").status, 0);
  EXPECT_EQ(run_binary("verify --model solv2 --suites harmonic").status, 1);
  EXPECT_EQ(run_binary("pages --model " SYMSPEC_MODELS_DIR "/broken.json").status, 2);
  EXPECT_EQ(run_binary("verify --model t2 --suites bogus").status, 2);
  EXPECT_EQ(run_binary("pages --model t2 --format xml").status, 2);
  EXPECT_EQ(run_binary("frobnicate").status, 2);
}

TEST(Binary, RepeatedRunsAreByteIdentical) {
  for (const auto* args : {"pages --model kt4xt2", "pages --model solv4 --format json",
                           "verify --model kt4 --suites thm1,stab,props --format json"}) {
    Process a = run_binary(args), b = run_binary(args);
    EXPECT_EQ(a.status, b.status);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out) << args;
  }
}
