#include <cstdio>
int main(){ std::puts("mapgf"); }
