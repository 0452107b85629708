#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bisidon/io.hpp"

using namespace bisidon;

TEST(io, parse_values_with_comments_and_blanks) {
    std::istringstream in(
        "# header comment\n"
        "1\n"
        "\n"
        "  3/4  \n"
        "-2\n"
        "   # indented comment\n"
        "10/4\n");
    auto vals = parse_value_lines(in);
    ASSERT_EQ(vals.size(), 4u);
    EXPECT_EQ(vals[0], make_rat(1));
    EXPECT_EQ(vals[1], make_rat(3, 4));
    EXPECT_EQ(vals[2], make_rat(-2));
    EXPECT_EQ(vals[3], make_rat(5, 2)); // canonicalized
}

TEST(io, duplicate_is_error) {
    std::istringstream in("1\n2\n2/1\n"); // 2 and 2/1 collide after reduction
    EXPECT_THROW(parse_value_lines(in), input_error);
}

TEST(io, decimal_rejected_with_line_number) {
    std::istringstream in("1\n2.5\n");
    try {
        parse_value_lines(in);
        FAIL() << "expected input_error";
    } catch (const input_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos);
        EXPECT_NE(msg.find("fraction"), std::string::npos);
    }
}

TEST(io, garbage_rejected) {
    std::istringstream in("1\nx7\n");
    EXPECT_THROW(parse_value_lines(in), input_error);
    std::istringstream zero_den("1/0\n");
    EXPECT_THROW(parse_value_lines(zero_den), input_error);
}

TEST(io, parse_rational_forms) {
    EXPECT_EQ(parse_rational("-6/4"), make_rat(-3, 2));
    EXPECT_EQ(parse_rational("00012"), make_rat(12));
    EXPECT_EQ(parse_rational("7"), make_rat(7));
    EXPECT_THROW(parse_rational(""), input_error);
    EXPECT_THROW(parse_rational("1.0"), input_error);
    EXPECT_THROW(parse_rational("a/b"), input_error);
}

TEST(io, file_round_trip) {
    const std::string path = "io_round_trip.tmp";
    std::vector<Rat> vals{make_rat(-5), make_rat(1, 3), make_rat(2),
                          make_rat(7, 2)};
    write_value_file(path, vals, "four values");
    auto back = read_input_file(path);
    EXPECT_EQ(back, vals);
    // the comment line survives as a comment
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "# four values");
    std::remove(path.c_str());
}

TEST(io, missing_file) {
    EXPECT_THROW(read_input_file("definitely_missing_file.txt"), input_error);
}
