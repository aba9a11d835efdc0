# Utils 模組