#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "hfusion/synthetic.hpp"
#include "hfusion/validate.hpp"
#include "support.hpp"

namespace hfusion {
namespace {

SyntheticSpec small_spec() {
    SyntheticSpec s;
    s.samples_per_class = 4;
    s.num_regions = 2;
    return s;
}

bool has_field(const std::vector<Violation>& v, const std::string& field) {
    for (const auto& x : v) {
        if (x.field == field) return true;
    }
    return false;
}

TEST(Validate, FreshSyntheticDatasetIsClean) {
    test::TempDir dir;
    auto ds = generate_synthetic(small_spec(), 1);
    EXPECT_TRUE(validate_dataset(ds).empty());
    save_dataset(ds, dir.path());
    EXPECT_TRUE(validate_dataset(dir.path()).empty());
}

TEST(Validate, LabelEqualToClassCountIsOutOfRange) {
    auto ds = generate_synthetic(small_spec(), 1);
    ds.manifest.rows[5].label = 27;
    const auto v = validate_dataset(ds);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].sample_id, ds.manifest.rows[5].sample_id);
    EXPECT_EQ(v[0].field, "label");
    ds.manifest.rows[5].label = -1;
    EXPECT_EQ(validate_dataset(ds).size(), 1u);
}

TEST(Validate, TextDimensionMismatchIsReported) {
    test::TempDir dir;
    auto ds = generate_synthetic(small_spec(), 1);
    ds.title_second = EmbeddingTable(static_cast<std::uint32_t>(ds.size()), 1, 8);
    save_dataset(ds, dir.path());
    const auto v = validate_dataset(dir.path());
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "title_c");
    EXPECT_NE(v[0].message.find("8"), std::string::npos);
    EXPECT_NE(v[0].message.find("16"), std::string::npos);
}

TEST(Validate, DuplicateIdsAreReported) {
    auto ds = generate_synthetic(small_spec(), 1);
    ds.manifest.rows[3].sample_id = ds.manifest.rows[2].sample_id;
    const auto v = validate_dataset(ds);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].field, "sample_id");
}

TEST(Validate, NonFiniteValuesAreReported) {
    auto ds = generate_synthetic(small_spec(), 1);
    ds.desc_first.sample(7)[3] = std::numeric_limits<float>::quiet_NaN();
    ds.image_regions.sample(9)[0] = std::numeric_limits<float>::infinity();
    const auto v = validate_dataset(ds);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].field, "desc_f");
    EXPECT_EQ(v[0].sample_id, ds.manifest.rows[7].sample_id);
    EXPECT_EQ(v[1].field, "image_regions");
}

TEST(Validate, SampleCountMismatchIsReported) {
    auto ds = generate_synthetic(small_spec(), 1);
    ds.manifest.rows.pop_back();
    const auto v = validate_dataset(ds);
    EXPECT_EQ(v.size(), 5u);  // every table disagrees with the manifest
}

TEST(Validate, RegionCountMismatchIsReported) {
    auto ds = generate_synthetic(small_spec(), 1);
    ds.manifest.header.num_regions = 3;
    EXPECT_TRUE(has_field(validate_dataset(ds), "image_regions"));
}

TEST(Validate, MissingFilesBecomeViolations) {
    test::TempDir dir;
    auto ds = generate_synthetic(small_spec(), 1);
    save_dataset(ds, dir.path());
    std::filesystem::remove(dir / "desc_c.mmeb");
    const auto v = validate_dataset(dir.path());
    EXPECT_TRUE(has_field(v, "desc_c"));

    test::TempDir empty;
    const auto w = validate_dataset(empty.path());
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].field, "manifest");
}

TEST(Validate, FormatViolation) {
    EXPECT_EQ(format_violation({"s000001", "label", "bad"}), "s000001 label: bad");
    EXPECT_EQ(format_violation({"", "title_f", "short"}), "<file> title_f: short");
}

}  // namespace
}  // namespace hfusion
