#include <gtest/gtest.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "incl.h"
#include "json.hpp"

namespace {

using Json = nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Owned {
  char* s = nullptr;
  ~Owned() { incl_string_free(s); }
  Json json() const { return Json::parse(s); }
};

class CApi : public ::testing::Test {
 protected:
  void SetUp() override { ASSERT_EQ(incl_context_create(&ctx), INCL_OK); }
  void TearDown() override { incl_context_destroy(ctx); }
  incl_context* ctx = nullptr;
};

TEST_F(CApi, IndexFromJson) {
  incl_inclusion* inc = nullptr;
  ASSERT_EQ(incl_inclusion_from_json(ctx, slurp(INCL_TEST_DATA "/swap.json").c_str(), &inc), INCL_OK);
  int a = 0, p = 0;
  incl_inclusion_dims(inc, &a, &p);
  EXPECT_EQ(a, 8);
  EXPECT_EQ(p, 4);
  Owned rep;
  ASSERT_EQ(incl_index(ctx, inc, &rep.s), INCL_OK);
  EXPECT_NEAR(rep.json()["index"]["scalar"].get<double>(), 2.0, 1e-8);
  incl_inclusion_destroy(inc);
}

TEST_F(CApi, ErrorsCarryStatusAndMessage) {
  incl_inclusion* inc = nullptr;
  EXPECT_EQ(incl_inclusion_from_json(ctx, "{oops", &inc), INCL_ERR_PARSE);
  EXPECT_EQ(inc, nullptr);
  EXPECT_NE(std::string(incl_context_last_error(ctx)), "");
  EXPECT_EQ(incl_inclusion_from_json(ctx, slurp(INCL_TEST_DATA "/not_star_closed.json").c_str(), &inc),
            INCL_ERR_VERIFICATION);
  EXPECT_NE(std::string(incl_context_last_error(ctx)).find("adjoint-closure"), std::string::npos);
  EXPECT_EQ(incl_inclusion_from_catalog(ctx, "nope", &inc), INCL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(incl_context_set_tolerance(ctx, 1e-12, 1e-9, 64, 0), INCL_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(incl_status_string(INCL_ERR_INFINITE_INDEX), "infinite index");
}

TEST_F(CApi, CatalogWitnessesAndDuality) {
  incl_inclusion* inc = nullptr;
  ASSERT_EQ(incl_inclusion_from_catalog(ctx, "swap-M2", &inc), INCL_OK);
  Owned rc, fw, beta;
  ASSERT_EQ(incl_rohlin_check(ctx, inc, nullptr, &rc.s), INCL_OK);
  EXPECT_TRUE(rc.json()["pass"].get<bool>());
  ASSERT_EQ(incl_duality(ctx, inc, "roundtrip", nullptr, &fw.s), INCL_OK);
  EXPECT_TRUE(fw.json()["pass"].get<bool>());
  ASSERT_EQ(incl_beta_map(ctx, inc, nullptr, &beta.s), INCL_OK);
  EXPECT_TRUE(beta.json()["pass"].get<bool>());
  Owned bad;
  EXPECT_EQ(incl_duality(ctx, inc, "sideways", nullptr, &bad.s), INCL_ERR_INVALID_ARGUMENT);
  incl_inclusion_destroy(inc);
}

TEST_F(CApi, ActionsAndSubgroups) {
  incl_action* act = nullptr;
  ASSERT_EQ(incl_action_from_catalog(ctx, "S3-translation", &act), INCL_OK);
  Owned fp, sub;
  ASSERT_EQ(incl_fixed_point(ctx, act, &fp.s), INCL_OK);
  ASSERT_EQ(incl_subgroup_inclusion(ctx, act, R"(["[0,1,2]", "[1,0,2]"])", &sub.s), INCL_OK);
  EXPECT_NEAR(sub.json()["report"]["index_scalar"].get<double>(), 3.0, 1e-8);
  Owned bad;
  EXPECT_EQ(incl_subgroup_inclusion(ctx, act, R"(["[1,2,0]"])", &bad.s), INCL_ERR_INVALID_ARGUMENT);
  incl_action_destroy(act);
}

TEST_F(CApi, CatalogRun) {
  Owned names, rep;
  ASSERT_EQ(incl_catalog_list(ctx, &names.s), INCL_OK);
  EXPECT_EQ(names.json().size(), 9u);
  int all_pass = 0;
  ASSERT_EQ(incl_catalog_run(ctx, "C(Z/*)", &rep.s, &all_pass), INCL_OK);
  EXPECT_EQ(all_pass, 1);
  EXPECT_EQ(rep.json()["entries"].size(), 2u);
}

}  // namespace
