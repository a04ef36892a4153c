#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "kstar/dataset.hpp"
#include "kstar/error.hpp"
#include "oracles.hpp"

using namespace kstar;

namespace {

Dataset one_dim(std::initializer_list<double> values) {
  std::vector<std::vector<double>> rows;
  for (double v : values) rows.push_back({v});
  return Dataset::from_rows(rows);
}

}  // namespace

TEST(LoadCsv, ParsesPlainRows) {
  const Dataset d = parse_csv("0,0\n1,0\n0,1");
  EXPECT_EQ(d.n(), 3u);
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_EQ(d.point(2)[1], 1.0);
}

TEST(LoadCsv, LabelsMappedByFirstAppearance) {
  const LabelledDataset d = parse_labelled_csv("0,0,a\n1,0,a\n9,9,b", std::size_t{2});
  EXPECT_EQ(d.labels, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(d.num_classes, 2u);
  EXPECT_EQ(d.data.dim(), 2u);
  EXPECT_EQ(d.data.point(2)[0], 9.0);
}

TEST(LoadCsv, NumericLabelsAreDensified) {
  const LabelledDataset d = parse_labelled_csv("7,1\n3,2\n7,3", std::size_t{0});
  EXPECT_EQ(d.labels, (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_EQ(d.data.point(1)[0], 2.0);
}

TEST(LoadCsv, RaggedRowNamesTheRow) {
  try {
    parse_csv("0,0\n1,0,1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, BadCellNamesRowAndColumn) {
  try {
    parse_csv("0,0\n1,x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 1"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, EmptyInputRejected) {
  EXPECT_THROW(parse_csv(""), ParseError);
  EXPECT_THROW(parse_csv("\n\n"), ParseError);
}

TEST(LoadCsv, NonFiniteRejected) {
  EXPECT_THROW(parse_csv("1,nan\n"), ParseError);
  EXPECT_THROW(parse_csv("1,inf\n"), ParseError);
}

TEST(LoadCsv, HeaderDetectedAndLabelByName) {
  const LabelledDataset d =
      parse_labelled_csv("x,y,class\n0,0,cat\n1,1,dog\n", std::string("class"));
  EXPECT_EQ(d.data.n(), 2u);
  EXPECT_EQ(d.labels, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(parse_csv("x,y\n1,2\n").n(), 1u);
  EXPECT_THROW(parse_labelled_csv("x,y\n1,2\n", std::string("nope")), ParseError);
}

TEST(LoadCsv, ExplicitHeaderModes) {
  CsvOptions none;
  none.header = HeaderMode::kAbsent;
  EXPECT_THROW(parse_csv("x,y\n1,2\n", none), ParseError);
  CsvOptions present;
  present.header = HeaderMode::kPresent;
  EXPECT_EQ(parse_csv("5,6\n1,2\n", present).n(), 1u);
}

TEST(LoadCsv, ReadsFilesAndReportsMissing) {
  const auto path = std::filesystem::temp_directory_path() / "kstar_test_load.csv";
  {
    std::ofstream out(path);
    out << "1.5,2\r\n-3e2, 4\r\n";
  }
  const Dataset d = load_csv(path);
  EXPECT_EQ(d.n(), 2u);
  EXPECT_EQ(d.point(1)[0], -300.0);
  EXPECT_EQ(d.point(1)[1], 4.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_csv(path), Error);
}

TEST(DatasetType, RejectsInvalidConstruction) {
  EXPECT_THROW(Dataset(Matrix(0, 2)), ContractError);
  EXPECT_THROW(Dataset::from_rows({{1.0, 2.0}, {1.0}}), ContractError);
  EXPECT_THROW(Dataset::from_rows({{1.0, NAN}}), ContractError);
}

TEST(PrecisionInfo, HalfSteps) {
  const PrecisionInfo p = precision_info(one_dim({0.0, 0.5, 1.0}));
  EXPECT_DOUBLE_EQ(p.min_gap, 0.5);
  EXPECT_DOUBLE_EQ(p.value_range, 1.0);
  EXPECT_DOUBLE_EQ(p.bits_per_coord, std::numbers::ln2);
}

TEST(PrecisionInfo, ConstantDataUsesFallback) {
  const PrecisionInfo p = precision_info(one_dim({3.0, 3.0}));
  EXPECT_EQ(p.min_gap, 0.0);
  EXPECT_EQ(p.value_range, 0.0);
  EXPECT_DOUBLE_EQ(p.bits_per_coord, 32.0 * std::numbers::ln2);
}

TEST(PrecisionInfo, UnevenGaps) {
  const PrecisionInfo p = precision_info(one_dim({0.0, 1.0, 10.0}));
  EXPECT_DOUBLE_EQ(p.min_gap, 1.0);
  EXPECT_DOUBLE_EQ(p.value_range, 10.0);
  EXPECT_DOUBLE_EQ(p.bits_per_coord, std::log(10.0));
}

TEST(PrecisionInfo, PoolsAllCoordinates) {
  // Gap 0.25 only appears across columns.
  const PrecisionInfo p = precision_info(Dataset::from_rows({{0.0, 2.0}, {1.0, 2.25}}));
  EXPECT_DOUBLE_EQ(p.min_gap, 0.25);
  EXPECT_DOUBLE_EQ(p.value_range, 2.25);
}

TEST(PrecisionInfo, MatchesAllPairsOracleAndInvariances) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> nd(1, 25), dd(1, 4);
    const auto pts = oracle::random_points(rng, nd(rng), dd(rng));
    const Dataset data = Dataset::from_rows(pts);
    const PrecisionInfo p = precision_info(data);
    const double gap = oracle::min_gap_all_pairs(pts);
    if (std::isfinite(gap)) {
      EXPECT_EQ(p.min_gap, gap);
    }

    auto shuffled = pts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const PrecisionInfo q = precision_info(Dataset::from_rows(shuffled));
    EXPECT_EQ(p.min_gap, q.min_gap);
    EXPECT_EQ(p.bits_per_coord, q.bits_per_coord);

    auto scaled = pts;
    for (auto& row : scaled) {
      for (double& v : row) v *= 4.0;  // power of two: exact scaling
    }
    EXPECT_DOUBLE_EQ(precision_info(Dataset::from_rows(scaled)).bits_per_coord, p.bits_per_coord);
  }
}
