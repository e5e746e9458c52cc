#include <cstdio>
int main() { std::puts("wavelab: placeholder"); }
