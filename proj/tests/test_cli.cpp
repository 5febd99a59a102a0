#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(STRESSLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  CliResult result;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) {
    result.output.append(buf, n);
    if (n < sizeof buf) break;
  }
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string(::testing::TempDir()) + name;
  std::ofstream out(path);
  out << content;
  return path;
}

TEST(Cli, ClassifyTwoBarTruss) {
  const CliResult r = run_cli("classify --builtin two_bar_truss");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("mechanisms: 0, self_stresses: 0"),
            std::string::npos);
}

TEST(Cli, ClassifySquareWithDiagonals) {
  const CliResult r = run_cli("classify --builtin square_diagonals");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("mechanisms: 0, self_stresses: 1"),
            std::string::npos);
}

TEST(Cli, SolvePatchRecordsAreByteStable) {
  const std::string args = "solve --builtin patch --m 3 --format records";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output, b.output);
  EXPECT_NE(a.output.find("record=element_stress"), std::string::npos);
  EXPECT_NE(a.output.find("sigma_xx=3\n"), std::string::npos);
  EXPECT_NE(a.output.find("sigma_yy=1"), std::string::npos);
}

TEST(Cli, SolveTwoBarTensions) {
  const CliResult r =
      run_cli("solve --builtin two_bar_truss --format records");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("tension=0.70710678118654757"), std::string::npos);
}

TEST(Cli, AllTractionMeshExitsOne) {
  const std::string path = write_temp(
      "all_traction.mesh",
      "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
      "t 0 1 2\nt 0 2 3\n"
      "bt 0 1\nbt 1 2\nbt 2 3\nbt 0 3\n");
  const CliResult r = run_cli("solve --mesh " + path + " --lambda 1 --mu 1");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("positive"), std::string::npos);
}

TEST(Cli, MechanismFrameworkExitsTwo) {
  const CliResult r = run_cli("solve --builtin square_mechanism");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("mechanism"), std::string::npos);
}

TEST(Cli, MechanismFrameworkFileExitsTwo) {
  const std::string path = write_temp(
      "mechanism.framework",
      "node 0 0\nnode 1 0\nnode 1 1\nnode 0 1\n"
      "bar 0 1 1\nbar 1 2 1\nbar 2 3 1\nbar 3 0 1\n"
      "pin 0 x\npin 0 y\npin 1 x\npin 1 y\n"
      "load 2 x 1\n");
  const CliResult r = run_cli("solve --framework " + path);
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, UnknownBuiltinExitsOne) {
  const CliResult r = run_cli("solve --builtin warsaw_circle");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, ConvergencePatchIsExact) {
  const CliResult r = run_cli(
      "convergence --builtin patch --sizes 2,4,8 --mode displacement");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("rate: exact"), std::string::npos);
}

TEST(Cli, SolveMeshFileWithAffineDatum) {
  // Patch problem from a file: left edge Dirichlet, u0 = (x, 0), traction
  // sigma nu with sigma = [[3,0],[0,1]]: right edge (3,0), top (0,1),
  // bottom (0,-1). Solved stress must be the patch stress.
  const std::string path = write_temp(
      "patch.mesh",
      "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
      "t 0 1 2\nt 0 2 3\n"
      "bd 0 3\nbt 0 1\nbt 1 2\nbt 2 3\n");
  // Constant traction cannot represent the three different edge tractions;
  // use the displacement-only route instead: all edges Dirichlet.
  const std::string path_all_d = write_temp(
      "patch_all_d.mesh",
      "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
      "t 0 1 2\nt 0 2 3\n"
      "bd 0 1\nbd 1 2\nbd 2 3\nbd 0 3\n");
  const CliResult r = run_cli(
      "solve --mesh " + path_all_d +
      " --mode displacement --lambda 1 --mu 1 "
      "--u0-affine 1,0,0,0,0,0 --format records");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("sigma_xx=3"), std::string::npos);
  (void)path;
}

TEST(Cli, MaterialFileAndOutFile) {
  // Mandel matrix of the isotropic lambda = mu = 1 material; output to file.
  const std::string mat = write_temp("patch.material",
                                     "3 1 0\n1 3 0\n0 0 2\n");
  const std::string mesh = write_temp(
      "patch_m1.mesh",
      "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
      "t 0 1 2\nt 0 2 3\n"
      "bd 0 1\nbd 1 2\nbd 2 3\nbd 0 3\n");
  const std::string out = std::string(::testing::TempDir()) + "solve.records";
  const CliResult r = run_cli("solve --mesh " + mesh +
                              " --mode displacement --material " + mat +
                              " --u0-affine 1,0,0,0,0,0 --format records"
                              " --out " + out);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.output.empty()) << r.output;
  std::ifstream in(out);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  EXPECT_NE(content.find("sigma_xx=3"), std::string::npos);
  EXPECT_NE(content.find("potential_energy="), std::string::npos);
}

TEST(Cli, BadMaterialFileExitsOne) {
  const std::string mat = write_temp("bad.material", "3 1 0\n1 3\n");
  const std::string mesh = write_temp(
      "square_for_bad_material.mesh",
      "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
      "t 0 1 2\nt 0 2 3\n"
      "bd 0 1\nbd 1 2\nbd 2 3\nbd 0 3\n");
  const CliResult r = run_cli("solve --mesh " + mesh +
                              " --mode displacement --material " + mat);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("material"), std::string::npos);
}

TEST(Cli, VerifyRecordsSmoke) {
  // The full audit suite is exercised by the acceptance run; here only the
  // record format of a cheap failing-free subset matters, so run with the
  // default seed and check the shape of the first audit record.
  const CliResult r = run_cli("verify --format records --seed 24389");
  EXPECT_NE(r.output.find("record=audit"), std::string::npos);
  EXPECT_NE(r.output.find("name=material_coercivity"), std::string::npos);
  EXPECT_NE(r.output.find("korn_bound_constant"), std::string::npos);
  EXPECT_EQ(r.exit_code, 0);
}

}  // namespace
