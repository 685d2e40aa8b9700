#!/usr/bin/env python3

from . precompute import run

if __name__ == '__main__':
    run()

