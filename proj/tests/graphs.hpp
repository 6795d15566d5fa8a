#pragma once

// Small graphs of groups shared by the tests and the acceptance run.
namespace testing_support {

// HNN extension of F2 identifying a with b.
inline const char* const kHnn =
    "[vertices]\n"
    "W: F2\n"
    "[edges]\n"
    "e: W --> W\n"
    "[edge groups]\n"
    "e: Z\n"
    "[injections]\n"
    "e: a -> a\n"
    "e': a -> b\n"
    "[tree]\n";

// Z x Z as an HNN extension of Z.
inline const char* const kZxZ =
    "[vertices]\n"
    "W: Z\n"
    "[edges]\n"
    "e: W --> W\n"
    "[edge groups]\n"
    "e: Z\n"
    "[injections]\n"
    "e: a -> a\n"
    "e': a -> a\n"
    "[tree]\n";

// A rigid vertex glued to a product along a Z^2, twice.
inline const char* const kTwoEdges =
    "[vertices]\n"
    "W: torus 2 | a -> a, b -> ab\n"
    "B: F2xZ\n"
    "[edges]\n"
    "e: W --> B\n"
    "f: W --> B\n"
    "[edge groups]\n"
    "e: Z2\n"
    "f: Z2\n"
    "[injections]\n"
    "e: a -> a, z -> z\n"
    "e': a -> a, z -> t\n"
    "f: b, z\n"
    "f': a, t\n"
    "[tree]\n"
    "e\n"
    "[base]\n"
    "W\n";

// Two interchangeable rigid vertices around a product, with a loop at the product.
inline const char* const kThreeVertex =
    "[vertices]\n"
    "U: torus 2 | a -> a, b -> ab\n"
    "B: F2xZ\n"
    "V: torus 2 | a -> a, b -> ab\n"
    "[edges]\n"
    "e: U --> B\n"
    "f: V --> B\n"
    "l: B --> B\n"
    "[edge groups]\n"
    "e: Z2\n"
    "f: Z2\n"
    "l: Z\n"
    "[injections]\n"
    "e: a -> a, z -> z\n"
    "e': a -> a, z -> t\n"
    "f: a -> b, z -> z\n"
    "f': a -> a, z -> t\n"
    "l: a -> z\n"
    "l': a -> z\n"
    "[tree]\n"
    "e, f\n"
    "[base]\n"
    "B\n";

}  // namespace testing_support
