// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

int main() {
  std::puts("mpolar: CLI under construction");
  return 2;
}
