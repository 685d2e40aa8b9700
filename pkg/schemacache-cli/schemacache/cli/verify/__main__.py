#!/usr/bin/env python3

from . verify import run

if __name__ == '__main__':
    run()

