#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"
#include "wavelock/report.hpp"
#include "wavelock/verification.hpp"

using namespace wavelock;
namespace ref = wavelock::testing::ref;

TEST(ReportJson, SchemaAndNulls) {
    const auto j = to_json(compute_bound({0.5, 2, 4, 1, 1}));
    EXPECT_EQ(j.at("schema"), "wavelock/1");
    EXPECT_EQ(j.at("regime"), "SingleP");
    EXPECT_TRUE(j.at("T").is_null());
    EXPECT_TRUE(j.at("residual_q").is_null());
    EXPECT_FALSE(j.at("residual_p").is_null());
    EXPECT_EQ(j.at("lambda2").get<double>(), 0.0);
    EXPECT_NEAR(j.at("bound").get<double>(), ref::single_p_bound, 1e-15);

    const auto u = to_json(compute_bound({0.1, 4, 1.5, 1, 1}));
    EXPECT_TRUE(u.at("r2").is_null());
}

TEST(ReportJson, RoundTripIsExact) {
    for (const auto& p : {ProblemParams{0.5, 2, 4, 1, 1}, ref::dual, ref::dual2,
                          ProblemParams{0.5, 2, 4, 1, 0.1}}) {
        const auto rep = compute_bound(p);
        const auto text = to_json(rep).dump();
        const auto back = report_from_json(nlohmann::json::parse(text));
        EXPECT_EQ(back.params, rep.params);
        EXPECT_EQ(back.regime, rep.regime);
        EXPECT_EQ(back.bound, rep.bound);
        EXPECT_EQ(back.lambda1, rep.lambda1);
        EXPECT_EQ(back.lambda2, rep.lambda2);
        EXPECT_EQ(back.T, rep.T);
        EXPECT_EQ(back.r1, rep.r1);
        EXPECT_EQ(back.r2, rep.r2);
        EXPECT_EQ(back.residual_p, rep.residual_p);
        EXPECT_EQ(back.residual_q, rep.residual_q);
        EXPECT_EQ(back.cross_norm, rep.cross_norm);
        EXPECT_EQ(to_json(back).dump(), text);
    }
}

TEST(ReportJson, RejectsForeignSchema) {
    auto j = to_json(compute_bound(ref::dual));
    j["schema"] = "other/2";
    EXPECT_THROW(report_from_json(j), InvalidParams);
    j["schema"] = "wavelock/1";
    j["regime"] = "Both";
    EXPECT_THROW(report_from_json(j), InvalidParams);
}

TEST(ReportText, NineSignificantDigits) {
    std::ostringstream os;
    write_text(os, compute_bound({0.5, 2, 4, 1, 1}));
    const std::string s = os.str();
    EXPECT_NE(s.find("bound: 0.162867504\n"), std::string::npos);
    EXPECT_NE(s.find("regime: SingleP\n"), std::string::npos);
    EXPECT_NE(s.find("T: null\n"), std::string::npos);
}

TEST(ReportCsv, HeaderAndEmptyCellsForAbsentValues) {
    std::ostringstream os;
    write_csv(os, compute_bound({0.5, 2, 4, 1, 1}));
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, csv_header(report_csv_columns()));
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
    EXPECT_NE(row.find(",SingleP,false,"), std::string::npos);
    EXPECT_EQ(os.str().find('\r'), std::string::npos);
}

TEST(ProfileCsv, DualFirstRowHoldsThePeak) {
    const auto rep = compute_bound(ref::dual);
    std::ostringstream os;
    write_profile_csv(os, ExtremalWeight::from_report(rep), 1000);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "d,magnitude,t,u");
    std::getline(in, line);
    double d, mag, t, u;
    char c;
    std::istringstream(line) >> d >> c >> mag >> c >> t >> c >> u;
    EXPECT_EQ(d, 0.0);
    EXPECT_NEAR(mag, ref::dual_T, 1e-12);
    double prev = mag;
    int rows = 1;
    while (std::getline(in, line)) {
        std::istringstream(line) >> d >> c >> mag >> c >> t >> c >> u;
        EXPECT_LE(mag, prev);
        prev = mag;
        ++rows;
    }
    EXPECT_EQ(rows, 1000);
    EXPECT_EQ(u, 0.0);
}

TEST(VerificationReport, SkipOperatorAndCorruption) {
    VerifyOptions opt;
    opt.skip_operator = true;
    opt.oracle_points = 500;
    const auto ok = run_verification(ref::dual, opt);
    EXPECT_TRUE(ok.pass());
    EXPECT_FALSE(ok.op.has_value());
    EXPECT_TRUE(to_json(ok).at("operator").is_null());

    opt.corrupt_scale = 1.5;
    const auto bad = run_verification(ref::dual, opt);
    EXPECT_FALSE(bad.pass());
    ASSERT_EQ(bad.failures.size(), 1u);
    EXPECT_EQ(bad.failures.front(), "weight_norms");
}
