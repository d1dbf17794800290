#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "eppv/dataset_csv.hpp"
#include "eppv/errors.hpp"

namespace eppv {
namespace {

const ColumnSpec kSpec{"y", {"x1"}, "x2", true};

TEST(ParseCsv, BasicLayout) {
  const Dataset data = parse_dataset_csv_text("y,x1,x2\n1,0.5,2\n0,1.5,-1\n1,-0.25,0\n0,3,4\n", kSpec);
  EXPECT_EQ(data.y.size(), 4);
  EXPECT_EQ(data.null_design.rows(), 4);
  EXPECT_EQ(data.null_design.cols(), 2);
  EXPECT_EQ(data.null_design(0, 0), 1.0);
  EXPECT_EQ(data.null_design(2, 1), -0.25);
  EXPECT_EQ(data.tested[1], -1.0);
  EXPECT_EQ(data.y[2], 1.0);
}

TEST(ParseCsv, ColumnsInAnyOrderAndExtrasIgnored) {
  const Dataset data = parse_dataset_csv_text("x2,id,y,x1\n5,a,1,7\n6,b,0,8\n", kSpec);
  EXPECT_EQ(data.tested[0], 5.0);
  EXPECT_EQ(data.null_design(1, 1), 8.0);
}

TEST(ParseCsv, NoInterceptOption) {
  ColumnSpec spec = kSpec;
  spec.add_intercept = false;
  const Dataset data = parse_dataset_csv_text("y,x1,x2\n1,0.5,2\n0,1.5,-1\n", spec);
  EXPECT_EQ(data.null_design.cols(), 1);
  EXPECT_EQ(data.null_design(0, 0), 0.5);
}

TEST(ParseCsv, CrlfMatchesLf) {
  const std::string lf = "y,x1,x2\n1,0.5,2\n0,1.5,-1\n1,2,3\n";
  std::string crlf;
  for (char ch : lf) {
    if (ch == '\n') crlf += '\r';
    crlf += ch;
  }
  const Dataset a = parse_dataset_csv_text(lf, kSpec);
  const Dataset b = parse_dataset_csv_text(crlf, kSpec);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.null_design, b.null_design);
  EXPECT_EQ(a.tested, b.tested);
}

TEST(ParseCsv, ByteOrderMarkAndQuotedHeader) {
  const Dataset data = parse_dataset_csv_text("\xEF\xBB\xBF\"y\", x1 ,x2\n1, 2 ,3\n0,4,5\n", kSpec);
  EXPECT_EQ(data.null_design(0, 1), 2.0);
}

TEST(ParseCsv, NonBinaryResponseReportsRow) {
  try {
    parse_dataset_csv_text("y,x1,x2\n1,0,0\n0,1,1\n2,1,1\n", kSpec);
    FAIL() << "expected NonBinaryResponse";
  } catch (const NonBinaryResponse& e) {
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(ParseCsv, NonNumericCellReportsCoordinates) {
  try {
    parse_dataset_csv_text("y,x1,x2\n1,0,0\n0,abc,1\n", kSpec);
    FAIL() << "expected NonNumericCell";
  } catch (const NonNumericCell& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(ParseCsv, MissingColumn) {
  EXPECT_THROW(parse_dataset_csv_text("y,x1\n1,0\n0,1\n", kSpec), MissingColumn);
}

TEST(ParseCsv, EmptyInput) {
  EXPECT_THROW(parse_dataset_csv_text("", kSpec), EmptyFile);
  EXPECT_THROW(parse_dataset_csv_text("y,x1,x2\n", kSpec), EmptyFile);
}

TEST(ParseCsv, RaggedRow) {
  EXPECT_THROW(parse_dataset_csv_text("y,x1,x2\n1,0\n", kSpec), DataError);
}

TEST(ParseCsv, RepeatedColumnsRejected) {
  EXPECT_THROW(parse_dataset_csv_text("y,x1,x2\n1,0,0\n0,1,1\n", ColumnSpec{"y", {"x1"}, "x1", true}),
               DataError);
}

TEST(ParseCsv, ReadsFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "eppv_csv_test.csv";
  std::ofstream(path) << "y,x1,x2\n1,0.5,2\n0,1.5,-1\n";
  EXPECT_EQ(parse_dataset_csv(path.string(), kSpec).y.size(), 2);
  std::filesystem::remove(path);
  EXPECT_THROW(parse_dataset_csv(path.string(), kSpec), DataError);
}

}  // namespace
}  // namespace eppv
