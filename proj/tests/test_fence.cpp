#include "doctest.h"

#include "fences/fence.hpp"

using namespace fences;

TEST_CASE("F(3,3,2) element classes") {
  const Fence f(parse_fence("F(3,3,2)"));
  CHECK(f.size() == 7);
  CHECK(f.segments() == 3);
  CHECK(f.shared(1) == 3);
  CHECK(f.shared(2) == 6);
  CHECK(f.element_class(3).kind == ElementKind::Peak);
  CHECK(f.element_class(6).kind == ElementKind::Valley);
  for (int k : {1, 2, 4, 5, 7}) CHECK(f.element_class(k).kind == ElementKind::Unshared);
  CHECK(f.segment_elements(1) == std::vector<int>{1, 2, 3});
  CHECK(f.segment_elements(2) == std::vector<int>{3, 4, 5, 6});
  CHECK(f.segment_elements(3) == std::vector<int>{6, 7});
  // unshared ranks count from the minimal end
  CHECK(f.unshared(1, 1) == 1);
  CHECK(f.unshared(2, 1) == 5);
  CHECK(f.unshared(2, 2) == 4);
  CHECK(f.unshared(3, 1) == 7);
  CHECK(f.unshared(3, 2) == kAbsent);
  CHECK(f.shared(0) == kAbsent);
  CHECK(f.shared(3) == kAbsent);
}

TEST_CASE("covers alternate along the zigzag") {
  for (const auto& shape : shapes_up_to(9)) {
    const Fence f(shape);
    CHECK(f.covers().size() == static_cast<std::size_t>(f.size() - 1));
    for (int k = 1; k < f.size(); ++k) CHECK((f.covered_by(k, k + 1) != f.covered_by(k + 1, k)));
    std::vector<int> pos(static_cast<std::size_t>(f.size()) + 1);
    const auto& ext = f.linear_extension();
    for (std::size_t i = 0; i < ext.size(); ++i) pos[static_cast<std::size_t>(ext[i])] = static_cast<int>(i);
    for (const auto& [lo, hi] : f.covers()) CHECK(pos[lo] < pos[hi]);
  }
}

TEST_CASE("principal ideals and filters agree with the order") {
  const Fence f(parse_fence("3,1,4"));
  for (int a = 1; a <= f.size(); ++a) {
    for (int b = 1; b <= f.size(); ++b) {
      CHECK(((f.down_mask(b) & bit(a)) != 0) == f.less_equal(a, b));
      CHECK(((f.up_mask(a) & bit(b)) != 0) == f.less_equal(a, b));
    }
  }
}

TEST_CASE("shape validation and parsing") {
  CHECK_THROWS_AS(FenceShape({3}), ShapeInvalid);
  CHECK_THROWS_AS(FenceShape({1, 3}), ShapeInvalid);
  CHECK_THROWS_AS(FenceShape({3, 0, 2}), ShapeInvalid);
  CHECK_THROWS_AS(parse_fence("F(3,x)"), ShapeInvalid);
  CHECK(parse_fence(" F( 3, 3 ,2 ) ").to_string() == "F(3,3,2)");
  CHECK(parse_fence("2,2").size() == 3);
  CHECK_THROWS_AS(Fence(parse_fence("2,2")).check_element(4), IndexOutOfRange);
}

TEST_CASE("shape counts") {
  CHECK(shapes_with_segments(3, 20).size() == 969);
  CHECK(shapes_with_segments(4, 20).size() == 3876);
  CHECK(shapes_with_segments(7, 15).size() == 3432);
  for (const auto& s : shapes_with_segments(4, 10)) CHECK(s.size() <= 10);
}

TEST_CASE("index reversal is an order-reversing involution exactly for palindromes with t odd") {
  for (const auto& shape : shapes_up_to(10)) {
    const Fence f(shape);
    const auto kappa = self_dual_involution(f);
    CHECK(kappa.has_value() == (shape.palindromic() && shape.segments() % 2 == 1));
    if (!kappa) continue;
    for (int a = 1; a <= f.size(); ++a) {
      CHECK((*kappa)((*kappa)(a)) == a);
      for (int b = 1; b <= f.size(); ++b) CHECK(f.less_equal(a, b) == f.less_equal((*kappa)(b), (*kappa)(a)));
    }
  }
}
